#include "harper/serialize.hpp"

namespace harper {

namespace {

Json angle_json(const RationalAngle& a) { return Json::array({a.num(), a.den()}); }
RationalAngle angle_from(const Json& j) {
  return RationalAngle(j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>());
}

}  // namespace

Json to_json(const GroupModel& m) {
  Json j;
  switch (m.family()) {
    case Family::Lattice:
      j["family"] = "lattice";
      j["dim"] = m.lattice_dim();
      if (m.has_quotient()) j["moduli"] = m.moduli();
      break;
    case Family::Heisenberg:
      j["family"] = "heisenberg";
      break;
    case Family::Lamplighter:
      j["family"] = "lamplighter";
      if (m.has_quotient()) j["cycle"] = m.lamp_cycle();
      break;
    case Family::FreeWord:
      j["family"] = "free";
      j["rank"] = m.free_rank();
      break;
    case Family::Extension:
      j["family"] = "extension";
      j["order"] = m.ext_order();
      j["base"] = to_json(m.ext_base());
      j["sigma"] = to_json(m.ext_sigma());
      break;
  }
  return j;
}

GroupModel group_from_json(const Json& j) {
  const std::string family = j.at("family").get<std::string>();
  // quotient parameters may be spelled flat or as a nested "quotient" object
  const Json& q = j.contains("quotient") ? j.at("quotient") : j;
  if (family == "lattice") {
    if (q.contains("moduli")) return GroupModel::lattice_quotient(q.at("moduli").get<std::vector<std::int64_t>>());
    return GroupModel::lattice(j.at("dim").get<int>());
  }
  if (family == "heisenberg") return GroupModel::heisenberg();
  if (family == "lamplighter") {
    if (q.contains("cycle")) return GroupModel::lamplighter_quotient(q.at("cycle").get<std::int64_t>());
    return GroupModel::lamplighter();
  }
  if (family == "free") return GroupModel::free_group(j.at("rank").get<int>());
  if (family == "extension")
    return GroupModel::extension(group_from_json(j.at("base")), j.at("order").get<std::int64_t>(),
                                 std::make_shared<const Multiplier>(multiplier_from_json(j.at("sigma"))));
  throw domain_error("unknown group family: " + family);
}

Json to_json(const GroupElement& e) {
  switch (e.family()) {
    case Family::Lattice:
      return Json{{"lattice", e.coords()}};
    case Family::Heisenberg:
      return Json{{"heisenberg", {e.heis_x(), e.heis_y(), e.heis_z()}}};
    case Family::Lamplighter:
      return Json{{"lamps", e.lamps()}, {"shift", e.shift()}};
    case Family::FreeWord:
      return Json{{"word", e.letters()}};
    case Family::Extension:
      return Json{{"k", e.ext_k()}, {"base", to_json(e.ext_base())}};
  }
  throw domain_error("to_json: bad element");
}

GroupElement element_from_json(const Json& j, const GroupModel& model) {
  switch (model.family()) {
    case Family::Lattice:
      return GroupElement::lattice(j.at("lattice").get<std::vector<std::int64_t>>());
    case Family::Heisenberg: {
      auto v = j.at("heisenberg").get<std::vector<std::int64_t>>();
      return GroupElement::heisenberg(v.at(0), v.at(1), v.at(2));
    }
    case Family::Lamplighter:
      return GroupElement::lamplighter(j.at("lamps").get<std::vector<std::int64_t>>(),
                                       j.at("shift").get<std::int64_t>());
    case Family::FreeWord:
      return GroupElement::free_word(j.at("word").get<std::vector<std::int64_t>>());
    case Family::Extension:
      return GroupElement::extension(j.at("k").get<std::int64_t>(),
                                     element_from_json(j.at("base"), model.ext_base()));
  }
  throw domain_error("element_from_json: bad family");
}

Json to_json(const Multiplier& s) {
  Json j;
  switch (s.kind()) {
    case Multiplier::Kind::Trivial:
      j["kind"] = "trivial";
      break;
    case Multiplier::Kind::MagneticZ2:
      j["kind"] = "magnetic_z2";
      if (s.alpha1_exact()) {
        j["alpha1_exact"] = angle_json(*s.alpha1_exact());
        j["alpha2_exact"] = angle_json(*s.alpha2_exact());
      } else {
        j["alpha1"] = s.alpha1();
        j["alpha2"] = s.alpha2();
      }
      break;
    case Multiplier::Kind::SymplecticLattice:
      j["kind"] = "symplectic";
      j["genus"] = s.genus();
      if (s.order())
        j["theta_exact"] = Json::array({static_cast<std::int64_t>(std::llround(s.theta() * static_cast<double>(*s.order()))), *s.order()});
      else
        j["theta"] = s.theta();
      break;
    default:
      throw domain_error("to_json: multiplier kind is not serializable");
  }
  return j;
}

Multiplier multiplier_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "trivial") return Multiplier::trivial();
  if (kind == "magnetic_z2") {
    if (j.contains("alpha1_exact"))
      return Multiplier::magnetic_z2(angle_from(j.at("alpha1_exact")), angle_from(j.at("alpha2_exact")));
    return Multiplier::magnetic_z2(j.at("alpha1").get<double>(), j.at("alpha2").get<double>());
  }
  if (kind == "symplectic") {
    if (j.contains("theta_exact"))
      return Multiplier::symplectic(j.at("theta_exact").at(0).get<std::int64_t>(),
                                    j.at("theta_exact").at(1).get<std::int64_t>(),
                                    j.at("genus").get<int>());
    return Multiplier::symplectic(j.at("theta").get<double>(), j.at("genus").get<int>());
  }
  throw domain_error("unknown multiplier kind: " + kind);
}

Json to_json(const AlgebraElement& a) {
  Json j;
  j["group"] = to_json(a.model());
  j["multiplier"] = to_json(a.sigma());
  j["d"] = a.block_size();
  Json sup = Json::array();
  for (const auto& [g, m] : a.support()) {
    Json entry;
    entry["element"] = to_json(g);
    Json mat = Json::array();
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) {
        mat.push_back(m(r, c).real());
        mat.push_back(m(r, c).imag());
      }
    entry["matrix"] = std::move(mat);
    sup.push_back(std::move(entry));
  }
  j["support"] = std::move(sup);
  return j;
}

AlgebraElement operator_from_json(const Json& j) {
  GroupModel model = group_from_json(j.at("group"));
  Multiplier sigma = multiplier_from_json(j.at("multiplier"));
  const int d = j.at("d").get<int>();
  AlgebraElement a(model, sigma, d);
  for (const auto& entry : j.at("support")) {
    const GroupElement g = element_from_json(entry.at("element"), model);
    const auto& mat = entry.at("matrix");
    if (static_cast<int>(mat.size()) != 2 * d * d)
      throw domain_error("operator_from_json: bad matrix size");
    BlockMatrix m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        const std::size_t base = 2 * static_cast<std::size_t>(r * d + c);
        m(r, c) = Cplx(mat.at(base).get<double>(), mat.at(base + 1).get<double>());
      }
    a.add(g, m);
  }
  return a;
}

}  // namespace harper
