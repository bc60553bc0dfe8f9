#include "harper/group.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "harper/cocycle.hpp"
#include "harper/rational_angle.hpp"

namespace harper {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

void check_same_family(const GroupElement& a, const GroupElement& b) {
  if (a.family() != b.family())
    throw domain_error("group elements from different families");
}

}  // namespace

// ---------------------------------------------------------------- elements

GroupElement GroupElement::lattice(std::vector<std::int64_t> coords) {
  GroupElement e;
  e.family_ = Family::Lattice;
  e.data_ = std::move(coords);
  return e;
}

GroupElement GroupElement::heisenberg(std::int64_t x, std::int64_t y, std::int64_t z) {
  GroupElement e;
  e.family_ = Family::Heisenberg;
  e.data_ = {x, y, z};
  return e;
}

GroupElement GroupElement::lamplighter(std::vector<std::int64_t> lamps, std::int64_t shift) {
  std::sort(lamps.begin(), lamps.end());
  for (std::size_t i = 1; i < lamps.size(); ++i)
    if (lamps[i] == lamps[i - 1]) throw domain_error("lamplighter: duplicate lamp position");
  GroupElement e;
  e.family_ = Family::Lamplighter;
  e.data_.reserve(lamps.size() + 1);
  e.data_.push_back(shift);
  e.data_.insert(e.data_.end(), lamps.begin(), lamps.end());
  return e;
}

GroupElement GroupElement::free_word(const std::vector<std::int64_t>& letters) {
  GroupElement e;
  e.family_ = Family::FreeWord;
  for (std::int64_t l : letters) {
    if (l == 0) throw domain_error("free word: zero letter");
    if (!e.data_.empty() && e.data_.back() == -l)
      e.data_.pop_back();  // free reduction
    else
      e.data_.push_back(l);
  }
  return e;
}

GroupElement GroupElement::extension(std::int64_t k, GroupElement base) {
  GroupElement e;
  e.family_ = Family::Extension;
  e.data_ = {k};
  e.base_ = std::make_shared<const GroupElement>(std::move(base));
  return e;
}

bool GroupElement::operator==(const GroupElement& o) const {
  if (family_ != o.family_ || data_ != o.data_) return false;
  if (family_ == Family::Extension) return *base_ == *o.base_;
  return true;
}

bool GroupElement::operator<(const GroupElement& o) const {
  if (family_ != o.family_) return family_ < o.family_;
  if (data_.size() != o.data_.size()) return data_.size() < o.data_.size();
  if (data_ != o.data_) return data_ < o.data_;
  if (family_ == Family::Extension) return *base_ < *o.base_;
  return false;
}

std::size_t GroupElement::hash() const {
  std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(family_);
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (std::int64_t v : data_) mix(static_cast<std::uint64_t>(v));
  if (family_ == Family::Extension) mix(base_->hash());
  return static_cast<std::size_t>(h);
}

std::string GroupElement::to_string() const {
  std::ostringstream os;
  switch (family_) {
    case Family::Lattice: {
      os << "(";
      for (std::size_t i = 0; i < data_.size(); ++i) os << (i ? "," : "") << data_[i];
      os << ")";
      break;
    }
    case Family::Heisenberg:
      os << "(" << data_[0] << "," << data_[1] << "," << data_[2] << ")";
      break;
    case Family::Lamplighter: {
      os << "({";
      for (std::size_t i = 1; i < data_.size(); ++i) os << (i > 1 ? "," : "") << data_[i];
      os << "}," << data_[0] << ")";
      break;
    }
    case Family::FreeWord: {
      os << "[";
      for (std::size_t i = 0; i < data_.size(); ++i) os << (i ? "," : "") << data_[i];
      os << "]";
      break;
    }
    case Family::Extension:
      os << "(z^" << data_[0] << "," << base_->to_string() << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------- models

GroupModel GroupModel::lattice(int dim) {
  if (dim < 1) throw domain_error("lattice dimension must be >= 1");
  GroupModel m;
  m.family_ = Family::Lattice;
  m.dim_ = dim;
  m.amenable_ = true;
  for (int i = 0; i < dim; ++i)
    for (int s : {1, -1}) {
      std::vector<std::int64_t> c(dim, 0);
      c[i] = s;
      m.generators_.push_back(GroupElement::lattice(std::move(c)));
    }
  return m;
}

GroupModel GroupModel::lattice_quotient(std::vector<std::int64_t> moduli) {
  GroupModel m = lattice(static_cast<int>(moduli.size()));
  for (std::int64_t n : moduli)
    if (n < 1) throw domain_error("lattice quotient: moduli must be positive");
  m.moduli_ = std::move(moduli);
  // canonicalize generators into residues
  std::vector<GroupElement> gens;
  for (const auto& g : m.generators_) {
    std::vector<std::int64_t> c = g.coords();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = floor_mod(c[i], m.moduli_[i]);
    gens.push_back(GroupElement::lattice(std::move(c)));
  }
  m.generators_ = std::move(gens);
  return m;
}

GroupModel GroupModel::heisenberg() {
  GroupModel m;
  m.family_ = Family::Heisenberg;
  m.amenable_ = true;
  m.generators_ = {
      GroupElement::heisenberg(1, 0, 0), GroupElement::heisenberg(-1, 0, 0),
      GroupElement::heisenberg(0, 1, 0), GroupElement::heisenberg(0, -1, 0)};
  return m;
}

GroupModel GroupModel::lamplighter() {
  GroupModel m;
  m.family_ = Family::Lamplighter;
  m.amenable_ = true;
  m.generators_ = {GroupElement::lamplighter({}, 1), GroupElement::lamplighter({}, -1),
                   GroupElement::lamplighter({0}, 0)};
  return m;
}

GroupModel GroupModel::lamplighter_quotient(std::int64_t cycle) {
  if (cycle < 1) throw domain_error("lamplighter quotient: cycle must be positive");
  GroupModel m = lamplighter();
  m.cycle_ = cycle;
  m.generators_ = {GroupElement::lamplighter({}, 1),
                   GroupElement::lamplighter({}, floor_mod(-1, cycle)),
                   GroupElement::lamplighter({0}, 0)};
  return m;
}

GroupModel GroupModel::free_group(int rank) {
  if (rank < 1) throw domain_error("free group rank must be >= 1");
  GroupModel m;
  m.family_ = Family::FreeWord;
  m.dim_ = rank;
  m.amenable_ = false;  // free groups admit no Folner scheme
  for (int i = 1; i <= rank; ++i) {
    m.generators_.push_back(GroupElement::free_word({i}));
    m.generators_.push_back(GroupElement::free_word({-i}));
  }
  return m;
}

GroupModel GroupModel::extension(GroupModel base, std::int64_t r,
                                 std::shared_ptr<const Multiplier> sigma) {
  if (r < 1) throw domain_error("extension order must be >= 1");
  GroupModel m;
  m.family_ = Family::Extension;
  m.amenable_ = base.amenable();
  m.ext_r_ = r;
  m.ext_sigma_ = std::move(sigma);
  // lifted base generators plus the kernel generator zeta_r
  const GroupElement base_id = base.identity();
  for (const auto& g : base.generators())
    m.generators_.push_back(GroupElement::extension(0, g));
  if (r > 1) m.generators_.push_back(GroupElement::extension(1, base_id));
  m.ext_base_ = std::make_shared<const GroupModel>(std::move(base));
  return m;
}

void GroupModel::set_generators(std::vector<GroupElement> gens) {
  if (gens.empty()) throw domain_error("set_generators: empty generating set");
  for (const auto& g : gens)
    if (g.family() != family_) throw domain_error("set_generators: element family mismatch");
  generators_ = std::move(gens);
}

bool GroupModel::finite() const {
  switch (family_) {
    case Family::Lattice: return !moduli_.empty();
    case Family::Lamplighter: return cycle_ > 0;
    case Family::Extension: return ext_base_->finite();
    default: return false;
  }
}

std::int64_t GroupModel::group_order() const {
  if (!finite()) throw domain_error("group_order: model is infinite");
  switch (family_) {
    case Family::Lattice: {
      std::int64_t n = 1;
      for (std::int64_t m : moduli_) n *= m;
      return n;
    }
    case Family::Lamplighter: {
      if (cycle_ > 40) throw resource_error("lamplighter quotient too large to enumerate");
      return cycle_ * (std::int64_t{1} << cycle_);
    }
    case Family::Extension: return ext_r_ * ext_base_->group_order();
    default: throw domain_error("group_order: unsupported family");
  }
}

GroupElement GroupModel::identity() const {
  switch (family_) {
    case Family::Lattice: return GroupElement::lattice(std::vector<std::int64_t>(dim_, 0));
    case Family::Heisenberg: return GroupElement::heisenberg(0, 0, 0);
    case Family::Lamplighter: return GroupElement::lamplighter({}, 0);
    case Family::FreeWord: return GroupElement::free_word({});
    case Family::Extension: return GroupElement::extension(0, ext_base_->identity());
  }
  throw domain_error("identity: bad family");
}

bool GroupModel::has_quotient() const {
  return (family_ == Family::Lattice && !moduli_.empty()) ||
         (family_ == Family::Lamplighter && cycle_ > 0) || family_ == Family::Extension;
}

bool GroupModel::same_group(const GroupModel& o) const {
  if (family_ != o.family_ || dim_ != o.dim_ || moduli_ != o.moduli_ || cycle_ != o.cycle_)
    return false;
  if (family_ == Family::Extension)
    return ext_r_ == o.ext_r_ && ext_base_->same_group(*o.ext_base_);
  return true;
}

std::string GroupModel::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::Lattice:
      os << "Z^" << dim_;
      if (!moduli_.empty()) {
        os << " mod (";
        for (std::size_t i = 0; i < moduli_.size(); ++i) os << (i ? "," : "") << moduli_[i];
        os << ")";
      }
      break;
    case Family::Heisenberg: os << "Heisenberg"; break;
    case Family::Lamplighter:
      os << "Z2 wr " << (cycle_ > 0 ? "Z_" + std::to_string(cycle_) : std::string("Z"));
      break;
    case Family::FreeWord: os << "F_" << dim_; break;
    case Family::Extension:
      os << "Z_" << ext_r_ << " ext of " << ext_base_->describe();
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------- group law

namespace {

GroupElement lamp_multiply(const GroupModel& model, const GroupElement& a, const GroupElement& b) {
  const std::int64_t n = model.lamp_cycle();
  std::vector<std::int64_t> lamps = a.lamps();
  std::unordered_set<std::int64_t> set(lamps.begin(), lamps.end());
  for (std::int64_t p : b.lamps()) {
    std::int64_t q = a.shift() + p;
    if (n > 0) q = floor_mod(q, n);
    if (!set.erase(q)) set.insert(q);  // Z2 sum: symmetric difference
  }
  std::vector<std::int64_t> out(set.begin(), set.end());
  std::int64_t t = a.shift() + b.shift();
  if (n > 0) t = floor_mod(t, n);
  return GroupElement::lamplighter(std::move(out), t);
}

}  // namespace

GroupElement multiply(const GroupModel& model, const GroupElement& a, const GroupElement& b) {
  check_same_family(a, b);
  if (a.family() != model.family()) throw domain_error("element does not belong to model");
  switch (model.family()) {
    case Family::Lattice: {
      if (a.coords().size() != b.coords().size())
        throw domain_error("lattice rank mismatch");
      std::vector<std::int64_t> c(a.coords().size());
      for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = a.coords()[i] + b.coords()[i];
        if (model.has_quotient()) c[i] = floor_mod(c[i], model.moduli()[i]);
      }
      return GroupElement::lattice(std::move(c));
    }
    case Family::Heisenberg:
      return GroupElement::heisenberg(a.heis_x() + b.heis_x(), a.heis_y() + b.heis_y(),
                                      a.heis_z() + b.heis_z() + a.heis_x() * b.heis_y());
    case Family::Lamplighter:
      return lamp_multiply(model, a, b);
    case Family::FreeWord: {
      std::vector<std::int64_t> w = a.letters();
      w.insert(w.end(), b.letters().begin(), b.letters().end());
      return GroupElement::free_word(w);
    }
    case Family::Extension: {
      const auto& base = model.ext_base();
      const std::int64_t r = model.ext_order();
      auto w = model.ext_sigma().evaluate_exact(a.ext_base(), b.ext_base());
      if (!w) throw domain_error("extension multiply: base multiplier is not rational");
      if (r % w->den() != 0)
        throw domain_error("extension multiply: multiplier value is not a Z_r root");
      std::int64_t exponent = w->num() * (r / w->den());
      std::int64_t k = floor_mod(a.ext_k() + b.ext_k() + exponent, r);
      return GroupElement::extension(k, multiply(base, a.ext_base(), b.ext_base()));
    }
  }
  throw domain_error("multiply: bad family");
}

GroupElement inverse(const GroupModel& model, const GroupElement& a) {
  switch (model.family()) {
    case Family::Lattice: {
      std::vector<std::int64_t> c(a.coords().size());
      for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = -a.coords()[i];
        if (model.has_quotient()) c[i] = floor_mod(c[i], model.moduli()[i]);
      }
      return GroupElement::lattice(std::move(c));
    }
    case Family::Heisenberg:
      return GroupElement::heisenberg(-a.heis_x(), -a.heis_y(),
                                      a.heis_x() * a.heis_y() - a.heis_z());
    case Family::Lamplighter: {
      const std::int64_t n = model.lamp_cycle();
      std::vector<std::int64_t> lamps = a.lamps();
      for (auto& p : lamps) {
        p -= a.shift();
        if (n > 0) p = floor_mod(p, n);
      }
      std::int64_t t = -a.shift();
      if (n > 0) t = floor_mod(t, n);
      return GroupElement::lamplighter(std::move(lamps), t);
    }
    case Family::FreeWord: {
      std::vector<std::int64_t> w(a.letters().rbegin(), a.letters().rend());
      for (auto& l : w) l = -l;
      return GroupElement::free_word(w);
    }
    case Family::Extension: {
      GroupElement binv = inverse(model.ext_base(), a.ext_base());
      auto w = model.ext_sigma().evaluate_exact(a.ext_base(), binv);
      if (!w) throw domain_error("extension inverse: base multiplier is not rational");
      const std::int64_t r = model.ext_order();
      std::int64_t exponent = w->num() * (r / w->den());
      return GroupElement::extension(floor_mod(-a.ext_k() - exponent, r), binv);
    }
  }
  throw domain_error("inverse: bad family");
}

std::vector<GroupElement> ball(const GroupModel& model, int radius) {
  if (radius < 0) throw domain_error("ball: negative radius");
  std::unordered_set<GroupElement, GroupElementHash> seen;
  std::vector<GroupElement> frontier{model.identity()};
  seen.insert(model.identity());
  // symmetric closure of the generating set
  std::vector<GroupElement> gens = model.generators();
  for (const auto& g : model.generators()) gens.push_back(inverse(model, g));
  for (int r = 0; r < radius; ++r) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        GroupElement y = multiply(model, x, g);
        if (seen.insert(y).second) {
          next.push_back(std::move(y));
          if (seen.size() > model.ball_cap())
            throw resource_error("ball: enumeration cap exceeded");
        }
      }
    frontier = std::move(next);
  }
  std::vector<GroupElement> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<GroupElement> kappa_boundary(const GroupModel& model,
                                         const std::vector<GroupElement>& X, int kappa) {
  std::unordered_set<GroupElement, GroupElementHash> inside(X.begin(), X.end());
  std::unordered_set<GroupElement, GroupElementHash> bd;
  const std::vector<GroupElement> shell = ball(model, kappa);
  for (const auto& x : X)
    for (const auto& w : shell) {
      GroupElement y = multiply(model, x, w);
      if (!inside.count(y)) bd.insert(std::move(y));
    }
  std::vector<GroupElement> out(bd.begin(), bd.end());
  std::sort(out.begin(), out.end());
  return out;
}

constexpr std::uint64_t kFolnerCap = 8u << 20;  // 8M elements

}  // namespace

FolnerScheme folner_set(const GroupModel& model, int level, int kappa) {
  if (!model.amenable())
    throw domain_error("NotAmenable: " + model.describe() + " admits no Folner scheme");
  if (level < 1) throw domain_error("folner_set: level must be >= 1");
  if (kappa < 0) throw domain_error("folner_set: negative kappa");

  FolnerScheme scheme;
  scheme.model = model;
  scheme.level = level;
  scheme.kappa = kappa;

  const std::int64_t m = level;
  switch (model.family()) {
    case Family::Lattice: {
      const int d = model.lattice_dim();
      std::vector<std::int64_t> lo(d), hi(d);
      std::uint64_t total = 1;
      for (int i = 0; i < d; ++i) {
        if (model.has_quotient()) {
          std::int64_t n = model.moduli()[i];
          lo[i] = 0;
          hi[i] = n - 1;
        } else {
          lo[i] = -m;
          hi[i] = m;
        }
        total *= static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
        if (total > kFolnerCap) throw resource_error("folner_set: set too large");
      }
      std::vector<std::int64_t> c = lo;
      while (true) {
        scheme.set.push_back(GroupElement::lattice(c));
        int i = d - 1;
        while (i >= 0 && ++c[i] > hi[i]) c[i--] = lo[i];
        if (i < 0) break;
      }
      break;
    }
    case Family::Heisenberg: {
      for (std::int64_t x = -m; x <= m; ++x)
        for (std::int64_t y = -m; y <= m; ++y)
          for (std::int64_t z = -m * m; z <= m * m; ++z)
            scheme.set.push_back(GroupElement::heisenberg(x, y, z));
      break;
    }
    case Family::Lamplighter: {
      std::int64_t lamp_lo = -m, lamp_hi = m, shift_lo = -m, shift_hi = m;
      if (model.has_quotient()) {
        lamp_lo = 0;
        lamp_hi = model.lamp_cycle() - 1;
        shift_lo = 0;
        shift_hi = model.lamp_cycle() - 1;
      }
      const int w = static_cast<int>(lamp_hi - lamp_lo + 1);
      if (w > 22 || (static_cast<std::uint64_t>(shift_hi - shift_lo + 1) << w) > kFolnerCap)
        throw resource_error("folner_set: set too large");
      for (std::int64_t t = shift_lo; t <= shift_hi; ++t)
        for (std::uint64_t mask = 0; mask < (1ull << w); ++mask) {
          std::vector<std::int64_t> lamps;
          for (int i = 0; i < w; ++i)
            if (mask >> i & 1) lamps.push_back(lamp_lo + i);
          scheme.set.push_back(GroupElement::lamplighter(std::move(lamps), t));
        }
      break;
    }
    case Family::Extension: {
      // Folner sets live on the quotient (= base) group; fibre over them.
      FolnerScheme base = folner_set(model.ext_base(), level, kappa);
      for (const auto& x : base.set)
        for (std::int64_t k = 0; k < model.ext_order(); ++k)
          scheme.set.push_back(GroupElement::extension(k, x));
      for (const auto& x : base.boundary)
        for (std::int64_t k = 0; k < model.ext_order(); ++k)
          scheme.boundary.push_back(GroupElement::extension(k, x));
      std::sort(scheme.set.begin(), scheme.set.end());
      std::sort(scheme.boundary.begin(), scheme.boundary.end());
      return scheme;
    }
    case Family::FreeWord:
      throw domain_error("NotAmenable");  // unreachable, amenable() is false
  }
  std::sort(scheme.set.begin(), scheme.set.end());
  if (kappa > 0) scheme.boundary = kappa_boundary(model, scheme.set, kappa);
  return scheme;
}

GroupElement quotient_project(const GroupModel& model, const GroupElement& a) {
  if (!model.has_quotient()) throw domain_error("quotient_project: no quotient configured");
  switch (model.family()) {
    case Family::Lattice: {
      if (a.family() != Family::Lattice || a.coords().size() != model.moduli().size())
        throw domain_error("quotient_project: element mismatch");
      std::vector<std::int64_t> c = a.coords();
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = floor_mod(c[i], model.moduli()[i]);
      return GroupElement::lattice(std::move(c));
    }
    case Family::Lamplighter: {
      if (a.family() != Family::Lamplighter)
        throw domain_error("quotient_project: element mismatch");
      const std::int64_t n = model.lamp_cycle();
      std::unordered_set<std::int64_t> set;
      for (std::int64_t p : a.lamps()) {
        std::int64_t q = floor_mod(p, n);
        if (!set.erase(q)) set.insert(q);
      }
      return GroupElement::lamplighter({set.begin(), set.end()}, floor_mod(a.shift(), n));
    }
    case Family::Extension: {
      if (a.family() != Family::Extension)
        throw domain_error("quotient_project: element mismatch");
      return a.ext_base();
    }
    default:
      throw domain_error("quotient_project: unsupported family");
  }
}

std::vector<GroupElement> enumerate_group(const GroupModel& model) {
  if (!model.finite()) throw domain_error("enumerate_group: model is infinite");
  std::vector<GroupElement> out;
  switch (model.family()) {
    case Family::Lattice:
    case Family::Lamplighter:
      return folner_set(model, 1, 0).set;
    case Family::Extension: {
      for (const auto& b : enumerate_group(model.ext_base()))
        for (std::int64_t k = 0; k < model.ext_order(); ++k)
          out.push_back(GroupElement::extension(k, b));
      std::sort(out.begin(), out.end());
      return out;
    }
    default:
      throw domain_error("enumerate_group: unsupported family");
  }
}

}  // namespace harper
