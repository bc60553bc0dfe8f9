#include "harper/config.hpp"

#include <fstream>
#include <numeric>
#include <set>

namespace harper {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw domain_error("config: " + where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw domain_error("config: unknown key '" + k + "' in " + where);
}

std::pair<std::int64_t, std::int64_t> parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return {std::stoll(s), 1};
  return {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("config: cannot read " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw domain_error(std::string("config: parse error: ") + e.what());
  }
  return parse(j);
}

ExperimentConfig ExperimentConfig::parse(const Json& j) {
  check_keys(j, {"seed", "group", "multiplier", "operator", "spectra", "identify",
                 "lamplighter_dims", "lift", "output"},
             "top level");
  if (!j.contains("seed")) throw domain_error("config: seed is mandatory");

  ExperimentConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("group")) {
    c.group = j.at("group");
    check_keys(c.group,
               {"family", "dim", "rank", "moduli", "cycle", "quotient", "ball_cap", "generators"},
               "group");
    if (c.group.contains("quotient"))
      check_keys(c.group.at("quotient"), {"moduli", "cycle"}, "group.quotient");
  }
  if (j.contains("multiplier")) {
    c.multiplier = j.at("multiplier");
    check_keys(c.multiplier,
               {"kind", "alpha1", "alpha2", "alpha1_exact", "alpha2_exact", "theta", "theta_exact",
                "genus", "order", "flux"},
               "multiplier");
  }
  if (j.contains("operator")) {
    c.op = j.at("operator");
    check_keys(c.op, {"name", "d", "support"}, "operator");
  }
  if (j.contains("spectra")) {
    c.spectra = j.at("spectra");
    check_keys(c.spectra,
               {"levels", "kappa", "grid", "qmax", "epsilon", "cap_dim", "cluster_tol", "moment_k",
                "jobs"},
               "spectra");
    if (c.spectra.contains("grid"))
      check_keys(c.spectra.at("grid"), {"min", "max", "points"}, "spectra.grid");
  }
  if (j.contains("identify")) {
    c.identify = j.at("identify");
    check_keys(c.identify, {"precision", "max_degree", "max_height", "targets"}, "identify");
  }
  if (j.contains("lamplighter_dims")) {
    c.lamp_dims = j.at("lamplighter_dims");
    check_keys(c.lamp_dims, {"n_min", "n_max", "lambdas"}, "lamplighter_dims");
  }
  if (j.contains("lift")) {
    c.lift = j.at("lift");
    check_keys(c.lift, {"flux", "torus"}, "lift");
  }
  if (j.contains("output")) {
    check_keys(j.at("output"), {"dir"}, "output");
    if (j.at("output").contains("dir")) c.out_dir = j.at("output").at("dir").get<std::string>();
  }
  return c;
}

GroupModel ExperimentConfig::make_group() const {
  if (group.is_null()) throw domain_error("config: missing group section");
  GroupModel m = group_from_json(group);
  if (group.contains("ball_cap")) m.set_ball_cap(group.at("ball_cap").get<std::uint64_t>());
  if (group.contains("generators")) {
    std::vector<GroupElement> gens;
    for (const auto& j : group.at("generators")) gens.push_back(element_from_json(j, m));
    m.set_generators(std::move(gens));
  }
  return m;
}

Multiplier ExperimentConfig::make_multiplier() const {
  if (multiplier.is_null()) return Multiplier::trivial();
  if (multiplier.contains("flux")) {
    const auto [p, q] = parse_fraction(multiplier.at("flux").get<std::string>());
    return Multiplier::magnetic_z2(RationalAngle(0, 1), RationalAngle(p, q));
  }
  return multiplier_from_json(multiplier);
}

AlgebraElement ExperimentConfig::make_operator() const {
  const GroupModel model = make_group();
  const Multiplier sigma = make_multiplier();
  std::string name = "harper";
  int d = 1;
  if (!op.is_null()) {
    if (op.contains("name")) name = op.at("name").get<std::string>();
    if (op.contains("d")) d = op.at("d").get<int>();
  }
  if (name == "custom") {
    if (!op.contains("support")) throw domain_error("config: custom operator needs support");
    Json full;
    full["group"] = group;
    full["multiplier"] = to_json(sigma);
    full["d"] = d;
    full["support"] = op.at("support");
    return operator_from_json(full);
  }
  return build_named_operator(name, model, sigma, d);
}

std::vector<int> ExperimentConfig::levels() const {
  if (spectra.contains("levels")) return spectra.at("levels").get<std::vector<int>>();
  return {5, 10, 20};
}

int ExperimentConfig::kappa() const {
  return spectra.contains("kappa") ? spectra.at("kappa").get<int>() : 1;
}

std::vector<double> ExperimentConfig::grid() const {
  double lo = -8.0, hi = 8.0;
  int pts = 201;
  if (spectra.contains("grid")) {
    const auto& g = spectra.at("grid");
    if (g.contains("min")) lo = g.at("min").get<double>();
    if (g.contains("max")) hi = g.at("max").get<double>();
    if (g.contains("points")) pts = g.at("points").get<int>();
  }
  if (pts < 2 || hi <= lo) throw domain_error("config: bad lambda grid");
  std::vector<double> out(static_cast<std::size_t>(pts));
  for (int i = 0; i < pts; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (pts - 1);
  return out;
}

int ExperimentConfig::qmax() const {
  return spectra.contains("qmax") ? spectra.at("qmax").get<int>() : 8;
}

double ExperimentConfig::epsilon() const {
  return spectra.contains("epsilon") ? spectra.at("epsilon").get<double>() : 1e-3;
}

std::int64_t ExperimentConfig::cap_dim() const {
  return spectra.contains("cap_dim") ? spectra.at("cap_dim").get<std::int64_t>() : 6000;
}

int ExperimentConfig::moment_k() const {
  return spectra.contains("moment_k") ? spectra.at("moment_k").get<int>() : 4;
}

int ExperimentConfig::jobs() const {
  return spectra.contains("jobs") ? spectra.at("jobs").get<int>() : 0;
}

Json ExperimentConfig::canonical() const {
  Json j;
  j["seed"] = seed;
  j["group"] = group;
  j["multiplier"] = multiplier;
  j["operator"] = op;
  j["spectra"] = spectra;
  j["identify"] = identify;
  j["lamplighter_dims"] = lamp_dims;
  j["lift"] = lift;
  return j;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace harper
