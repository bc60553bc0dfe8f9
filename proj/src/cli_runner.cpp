#include "harper/cli_runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <thread>

#include "harper/butterfly.hpp"
#include "harper/config.hpp"
#include "harper/density.hpp"
#include "harper/minpoly.hpp"
#include "harper/moments.hpp"
#include "harper/multiplicity.hpp"
#include "harper/oracle.hpp"

namespace harper {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunContext {
  ExperimentConfig cfg;
  std::string out_dir;
  int jobs = 0;
  int precision_override = 0;
  std::int64_t cap_dim_override = 0;

  std::int64_t cap_dim() const { return cap_dim_override > 0 ? cap_dim_override : cfg.cap_dim(); }
  int effective_jobs() const {
    if (jobs > 0) return jobs;
    if (cfg.jobs() > 0) return cfg.jobs();
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
  }
  int precision() const {
    if (precision_override > 0) return precision_override;
    if (cfg.identify.contains("precision")) return cfg.identify.at("precision").get<int>();
    return 256;
  }

  fs::path out_path(const std::string& name) const {
    fs::create_directories(out_dir);
    return fs::path(out_dir) / name;
  }

  // content-keyed cache: (config canonical minus concurrency, command, version)
  fs::path cache_dir() const {
    if (const char* env = std::getenv("HARPER_CACHE_DIR")) return fs::path(env);
    return fs::path(out_dir) / ".cache";
  }
  std::string cache_key(const std::string& command) const {
    Json c = cfg.canonical();
    if (c.contains("spectra") && c["spectra"].is_object()) c["spectra"].erase("jobs");
    c["__command"] = command;
    c["__version"] = kVersionTag;
    c["__cap_dim"] = cap_dim();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(c.dump())));
    return buf;
  }
  bool cache_fetch(const std::string& command, const fs::path& target) const {
    const fs::path src = cache_dir() / (command + "-" + cache_key(command) + ".cache");
    if (!fs::exists(src)) return false;
    fs::create_directories(target.parent_path());
    fs::copy_file(src, target, fs::copy_options::overwrite_existing);
    return true;
  }
  void cache_store(const std::string& command, const fs::path& artifact) const {
    fs::create_directories(cache_dir());
    const fs::path dst = cache_dir() / (command + "-" + cache_key(command) + ".cache");
    fs::copy_file(artifact, dst, fs::copy_options::overwrite_existing);
  }
};

// ------------------------------------------------------------------ commands

int cmd_check_cocycle(const RunContext& ctx) {
  const GroupModel model = ctx.cfg.make_group();
  const Multiplier sigma = ctx.cfg.make_multiplier();
  const VerifyReport rep = verify(sigma, model, 1000, ctx.cfg.seed);
  Json j;
  j["max_cocycle_residual"] = rep.max_cocycle_residual;
  j["max_normalization_residual"] = rep.max_normalization_residual;
  j["samples_used"] = rep.samples_used;
  j["exhaustive"] = rep.exhaustive;
  j["seed"] = ctx.cfg.seed;
  std::ofstream(ctx.out_path("cocycle_report.json")) << j.dump(2) << "\n";
  std::cout << "check-cocycle: max cocycle residual " << fmt17(rep.max_cocycle_residual)
            << ", max normalization residual " << fmt17(rep.max_normalization_residual) << " ("
            << rep.samples_used << (rep.exhaustive ? " exhaustive" : " sampled") << " triples)\n";
  return 0;
}

int cmd_moments(const RunContext& ctx, int k_flag) {
  const AlgebraElement a = ctx.cfg.make_operator();
  const int k = k_flag > 0 ? k_flag : ctx.cfg.moment_k();
  const Cplx m = exact_moment(a, k);
  Json j;
  j["k"] = k;
  j["moment"] = {m.real(), m.imag()};
  if (k <= 8 && a.support().size() <= 12) {
    const Cplx w = oracle::walk_moment(a, k);
    j["walk_oracle"] = {w.real(), w.imag()};
    j["oracle_distance"] = std::abs(m - w);
  }
  std::ofstream(ctx.out_path("moments.json")) << j.dump(2) << "\n";
  std::cout << fmt17(m.real());
  if (std::abs(m.imag()) > 1e-15) std::cout << " + " << fmt17(m.imag()) << "i";
  std::cout << "\n";
  return 0;
}

std::vector<SpectralDensity> level_densities(const RunContext& ctx, const AlgebraElement& a) {
  const double cluster = ctx.cfg.spectra.contains("cluster_tol")
                             ? ctx.cfg.spectra.at("cluster_tol").get<double>()
                             : 1e-8;
  std::vector<SpectralDensity> out;
  for (int level : ctx.cfg.levels()) {
    const FolnerScheme scheme = folner_set(a.model(), level, ctx.cfg.kappa());
    out.push_back(spectral_density(truncate(a, scheme, ctx.cap_dim()), cluster));
  }
  return out;
}

int cmd_ids(const RunContext& ctx) {
  const fs::path target = ctx.out_path("ids.csv");
  if (ctx.cache_fetch("ids", target)) {
    std::cout << "ids: cached, wrote " << target.string() << "\n";
    return 0;
  }
  const AlgebraElement a = ctx.cfg.make_operator();
  const auto grid = ctx.cfg.grid();
  const auto levels = ctx.cfg.levels();
  const auto densities = level_densities(ctx, a);
  std::ofstream out(target);
  out << "level,lambda,F,D\n";
  for (std::size_t li = 0; li < levels.size(); ++li)
    for (double l : grid)
      out << levels[li] << "," << fmt17(l) << "," << fmt17(densities[li].F(l)) << ","
          << fmt17(densities[li].D(l)) << "\n";
  out.close();
  ctx.cache_store("ids", target);
  std::cout << "ids: " << levels.size() << " levels x " << grid.size() << " grid points, wrote "
            << target.string() << "\n";
  return 0;
}

int cmd_gaps(const RunContext& ctx) {
  const AlgebraElement a = ctx.cfg.make_operator();
  const auto grid = ctx.cfg.grid();
  const auto levels = ctx.cfg.levels();
  const auto densities = level_densities(ctx, a);
  const auto flagged = detect_gaps(densities, grid, ctx.cfg.epsilon());
  const fs::path target = ctx.out_path("gaps.csv");
  std::ofstream out(target);
  out << "lambda1,lambda2,level,mass\n";
  for (const auto& g : flagged)
    for (std::size_t li = 0; li < levels.size(); ++li)
      out << fmt17(g.lambda1) << "," << fmt17(g.lambda2) << "," << levels[li] << ","
          << fmt17(g.masses[li]) << "\n";
  std::cout << "gaps: " << flagged.size() << " flagged intervals at epsilon "
            << fmt17(ctx.cfg.epsilon()) << ", wrote " << target.string() << "\n";
  return 0;
}

int cmd_butterfly(const RunContext& ctx, int qmax_flag) {
  const fs::path target = ctx.out_path("butterfly.csv");
  // qmax flag participates in the cache key via a copy of the config
  RunContext keyed = ctx;
  if (qmax_flag > 0) keyed.cfg.spectra["qmax"] = qmax_flag;
  if (keyed.cache_fetch("butterfly", target)) {
    std::cout << "butterfly: cached, wrote " << target.string() << "\n";
    return 0;
  }
  const int qmax = qmax_flag > 0 ? qmax_flag : ctx.cfg.qmax();
  const GroupModel model = ctx.cfg.group.is_null() ? GroupModel::lattice(2) : ctx.cfg.make_group();
  const int level = ctx.cfg.levels().empty() ? 6 : ctx.cfg.levels().front();
  const auto rows =
      butterfly_sweep(model, 1, qmax, level, ctx.cap_dim(), ctx.effective_jobs());
  std::ofstream out(target);
  out << "q,p,eig_index,eigenvalue\n";
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.eigenvalues.size(); ++i)
      out << row.q << "," << row.p << "," << i << "," << fmt17(row.eigenvalues[i]) << "\n";
  out.close();
  keyed.cache_store("butterfly", target);
  std::cout << "butterfly: " << rows.size() << " flux rows at level " << level << ", wrote "
            << target.string() << "\n";
  return 0;
}

int cmd_lamplighter_dims(const RunContext& ctx) {
  int n_min = 2, n_max = 9;
  std::vector<std::string> lambdas = {"0"};
  if (!ctx.cfg.lamp_dims.is_null()) {
    if (ctx.cfg.lamp_dims.contains("n_min")) n_min = ctx.cfg.lamp_dims.at("n_min").get<int>();
    if (ctx.cfg.lamp_dims.contains("n_max")) n_max = ctx.cfg.lamp_dims.at("n_max").get<int>();
    if (ctx.cfg.lamp_dims.contains("lambdas"))
      lambdas = ctx.cfg.lamp_dims.at("lambdas").get<std::vector<std::string>>();
  }
  const fs::path target = ctx.out_path("lamplighter_dims.csv");
  std::ofstream out(target);
  out << "n,lambda,multiplicity,total_dim,normalized\n";
  for (int n = n_min; n <= n_max; ++n) {
    const GroupModel model = GroupModel::lamplighter_quotient(n);
    const AlgebraElement a = build_named_operator("lamplighter_rw", model, Multiplier::trivial(), 1);
    for (const auto& ls : lambdas) {
      const auto slash = ls.find('/');
      const std::int64_t num = std::stoll(slash == std::string::npos ? ls : ls.substr(0, slash));
      const std::int64_t den = slash == std::string::npos ? 1 : std::stoll(ls.substr(slash + 1));
      const auto res = quotient_multiplicity(a, num, den, MultiplicityMode::Exact);
      out << n << "," << ls << "," << res.multiplicity << "," << res.total_dim << ","
          << fmt17(res.normalized) << "\n";
    }
  }
  std::cout << "lamplighter-dims: n in [" << n_min << "," << n_max << "], wrote "
            << target.string() << "\n";
  return 0;
}

int cmd_lift_compare(const RunContext& ctx) {
  std::string flux = "1/2";
  std::int64_t N = 4;
  if (!ctx.cfg.lift.is_null()) {
    if (ctx.cfg.lift.contains("flux")) flux = ctx.cfg.lift.at("flux").get<std::string>();
    if (ctx.cfg.lift.contains("torus")) N = ctx.cfg.lift.at("torus").get<std::int64_t>();
  }
  const auto slash = flux.find('/');
  const std::int64_t p = std::stoll(flux.substr(0, slash));
  const std::int64_t q = std::stoll(flux.substr(slash + 1));
  if (N % q != 0) throw domain_error("lift-compare: flux denominator must divide torus size");

  const GroupModel torus = GroupModel::lattice_quotient({N, N});
  const Multiplier sigma = Multiplier::magnetic_z2(RationalAngle(0, 1), RationalAngle(p, q));
  const AlgebraElement a = build_named_operator("harper", torus, sigma, 1);
  const auto twisted = spectral_density(truncate(a, folner_set(torus, 1, 0), ctx.cap_dim()));

  const ExtensionLift lift = lift_to_extension(a);
  const auto lifted = spectral_density(
      truncate(lift.lifted, folner_set(lift.extension_model, 1, 0), ctx.cap_dim()));

  const fs::path target = ctx.out_path("lift_compare.csv");
  std::ofstream out(target);
  out << "eig_index,lambda_twisted,nearest_lifted,abs_diff\n";
  double worst = 0.0;
  const auto& le = lifted.eigenvalues();
  for (std::size_t i = 0; i < twisted.eigenvalues().size(); ++i) {
    const double l = twisted.eigenvalues()[i];
    auto it = std::lower_bound(le.begin(), le.end(), l);
    double nearest = le.back();
    if (it != le.end()) nearest = *it;
    if (it != le.begin()) {
      const double lo = *(it - 1);
      if (std::abs(lo - l) < std::abs(nearest - l)) nearest = lo;
    }
    const double d = std::abs(nearest - l);
    worst = std::max(worst, d);
    out << i << "," << fmt17(l) << "," << fmt17(nearest) << "," << fmt17(d) << "\n";
  }
  std::cout << "lift-compare: flux " << flux << " on Z_" << N
            << "^2, max spectral distance " << fmt17(worst) << ", wrote " << target.string()
            << "\n";
  return 0;
}

int cmd_minpoly(const RunContext& ctx) {
  if (ctx.cfg.identify.is_null() || !ctx.cfg.identify.contains("targets"))
    throw domain_error("minpoly: identify.targets is required");
  const int prec = ctx.precision();
  const int max_degree =
      ctx.cfg.identify.contains("max_degree") ? ctx.cfg.identify.at("max_degree").get<int>() : 8;
  const std::int64_t max_height = ctx.cfg.identify.contains("max_height")
                                      ? ctx.cfg.identify.at("max_height").get<std::int64_t>()
                                      : 1000000;
  Json report = Json::array();
  for (const auto& target : ctx.cfg.identify.at("targets")) {
    const std::int64_t n = target.at("cycle").get<std::int64_t>();
    const double lambda0 = target.at("lambda0").get<double>();
    const GroupModel model = GroupModel::lamplighter_quotient(n);
    const AlgebraElement a = build_named_operator("lamplighter_rw", model, Multiplier::trivial(), 1);
    const Truncation t = truncate(a, folner_set(model, 1, 0), ctx.cap_dim());
    Json entry;
    entry["cycle"] = n;
    try {
      const HighPrecValue x = refine_eigenvalue(t, lambda0, prec);
      const MinPolyResult mp = minimal_polynomial(x, max_degree, max_height);
      entry["lambda_double"] = x.value.to_double();
      entry["lambda_hex_highprec"] = x.value.hex_string();
      entry["residual"] = std::pow(2.0, x.residual_log2);
      if (mp.status == MinPolyResult::Status::Found) {
        entry["status"] = mp.irreducibility_verified ? "found" : "found_irreducibility_unverified";
        Json coeffs = Json::array();
        for (const auto& c : mp.poly.coeffs) coeffs.push_back(c.get_str());
        entry["poly_coeffs"] = coeffs;
        entry["poly"] = mp.poly.to_string();
        entry["p_of_lambda_log2"] = mp.p_of_x_log2;
      } else {
        entry["status"] = "not_found";
      }
    } catch (const numeric_error& e) {
      entry["status"] = std::string("numeric_error: ") + e.what();
    }
    report.push_back(std::move(entry));
    if (report.back().contains("poly"))
      std::cout << "minpoly: cycle " << n << " lambda "
                << fmt17(report.back()["lambda_double"].get<double>()) << " -> "
                << report.back()["poly"].get<std::string>() << "\n";
    else
      std::cout << "minpoly: cycle " << n << " -> " << report.back()["status"].get<std::string>()
                << "\n";
  }
  std::ofstream(ctx.out_path("minpoly.json")) << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Generalized Harper operators over twisted group algebras"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed_flag = 0;
  bool seed_set = false;
  int jobs = 0, precision = 0, k_flag = 0, qmax_flag = 0;
  std::int64_t cap_dim = 0;

  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory override");
  auto* seed_opt = app.add_option("--seed", seed_flag, "seed override");
  app.add_option("--jobs", jobs, "concurrency degree (default: available parallelism)");
  app.add_option("--precision", precision, "refinement precision bits override");
  app.add_option("--cap-dim", cap_dim, "truncation dimension cap override");

  auto* c_cocycle = app.add_subcommand("check-cocycle", "verify multiplier axioms");
  auto* c_moments = app.add_subcommand("moments", "exact von Neumann moments");
  c_moments->add_option("--k", k_flag, "moment power");
  auto* c_ids = app.add_subcommand("ids", "integrated density of states table");
  auto* c_gaps = app.add_subcommand("gaps", "spectral gap scan");
  auto* c_butterfly = app.add_subcommand("butterfly", "Hofstadter flux sweep");
  c_butterfly->add_option("--qmax", qmax_flag, "maximum flux denominator");
  auto* c_lamp = app.add_subcommand("lamplighter-dims", "exact quotient multiplicities");
  auto* c_lift = app.add_subcommand("lift-compare", "twisted vs lifted extension spectra");
  auto* c_minpoly = app.add_subcommand("minpoly", "minimal polynomials of refined eigenvalues");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  seed_set = seed_opt->count() > 0;

  try {
    RunContext ctx;
    ctx.cfg = ExperimentConfig::load(config_path);
    if (seed_set) ctx.cfg.seed = seed_flag;
    ctx.out_dir = out_dir.empty() ? ctx.cfg.out_dir : out_dir;
    ctx.jobs = jobs;
    ctx.precision_override = precision;
    ctx.cap_dim_override = cap_dim;

    if (c_cocycle->parsed()) return cmd_check_cocycle(ctx);
    if (c_moments->parsed()) return cmd_moments(ctx, k_flag);
    if (c_ids->parsed()) return cmd_ids(ctx);
    if (c_gaps->parsed()) return cmd_gaps(ctx);
    if (c_butterfly->parsed()) return cmd_butterfly(ctx, qmax_flag);
    if (c_lamp->parsed()) return cmd_lamplighter_dims(ctx);
    if (c_lift->parsed()) return cmd_lift_compare(ctx);
    if (c_minpoly->parsed()) return cmd_minpoly(ctx);
    return 1;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace harper
