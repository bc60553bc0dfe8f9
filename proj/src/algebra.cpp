#include "harper/algebra.hpp"

#include <Eigen/SVD>

namespace harper {

namespace {

void check_compatible(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.model().same_group(b.model()) || a.block_size() != b.block_size())
    throw domain_error("algebra elements over different groups or block sizes");
}

double op_norm(const BlockMatrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<BlockMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

// ---------------------------------------------------------------- VectorFS

void VectorFS::add(const GroupElement& g, const BlockVector& v) {
  auto it = sup_.find(g);
  if (it == sup_.end()) {
    if (v.isZero(0.0)) return;
    sup_.emplace(g, v);
  } else {
    it->second += v;
    if (it->second.isZero(0.0)) sup_.erase(it);
  }
}

BlockVector VectorFS::at(const GroupElement& g) const {
  auto it = sup_.find(g);
  if (it == sup_.end()) return BlockVector::Zero(d_);
  return it->second;
}

double VectorFS::norm() const {
  double s = 0.0;
  for (const auto& [g, v] : sup_) s += v.squaredNorm();
  return std::sqrt(s);
}

VectorFS VectorFS::delta(const GroupModel& model, const GroupElement& g, int d, int component) {
  VectorFS f(model, d);
  BlockVector v = BlockVector::Zero(d);
  v(component) = 1.0;
  f.add(g, v);
  return f;
}

// ---------------------------------------------------------------- AlgebraElement

void AlgebraElement::add(const GroupElement& g, const BlockMatrix& m) {
  if (m.rows() != d_ || m.cols() != d_) throw domain_error("coefficient block size mismatch");
  auto it = sup_.find(g);
  if (it == sup_.end()) {
    if (m.isZero(0.0)) return;
    sup_.emplace(g, m);
  } else {
    it->second += m;
    if (it->second.isZero(0.0)) sup_.erase(it);
  }
}

BlockMatrix AlgebraElement::coefficient(const GroupElement& g) const {
  auto it = sup_.find(g);
  if (it == sup_.end()) return BlockMatrix::Zero(d_, d_);
  return it->second;
}

double AlgebraElement::norm1() const {
  double s = 0.0;
  for (const auto& [g, m] : sup_) s += op_norm(m);
  return s;
}

int AlgebraElement::propagation() const {
  // smallest radius whose ball contains the support
  int r = 0;
  while (r < 64) {
    auto b = ball(model_, r);
    bool all = true;
    for (const auto& [g, m] : sup_)
      if (!std::binary_search(b.begin(), b.end(), g)) {
        all = false;
        break;
      }
    if (all) return r;
    ++r;
  }
  throw resource_error("propagation: support radius exceeds 64");
}

bool AlgebraElement::certify_self_adjoint(double tol) const {
  for (const auto& [g, m] : sup_) {
    const GroupElement gi = inverse(model_, g);
    const BlockMatrix rhs = coefficient(gi) * sigma_.evaluate(g, gi);
    if ((BlockMatrix(m.adjoint()) - rhs).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------- operations

VectorFS apply(const AlgebraElement& a, const VectorFS& f) {
  if (!a.model().same_group(f.model()) || a.block_size() != f.block_size())
    throw domain_error("apply: operator/vector mismatch");
  VectorFS out(f.model(), f.block_size());
  // (Af)(gh) += A(g) sigma(g,h) f(h)
  for (const auto& [g, m] : a.support())
    for (const auto& [h, v] : f.support()) {
      const GroupElement x = multiply(a.model(), g, h);
      out.add(x, BlockVector(m * v * a.sigma().evaluate(g, h)));
    }
  return out;
}

AlgebraElement alg_multiply(const AlgebraElement& a, const AlgebraElement& b) {
  check_compatible(a, b);
  AlgebraElement out(a.model(), a.sigma(), a.block_size());
  for (const auto& [g, ma] : a.support())
    for (const auto& [h, mb] : b.support()) {
      const GroupElement k = multiply(a.model(), g, h);
      out.add(k, BlockMatrix(ma * mb * a.sigma().evaluate(g, h)));
    }
  return out;
}

AlgebraElement adjoint(const AlgebraElement& a) {
  AlgebraElement out(a.model(), a.sigma(), a.block_size());
  for (const auto& [g, m] : a.support()) {
    const GroupElement gi = inverse(a.model(), g);
    out.add(gi, BlockMatrix(m.adjoint() * std::conj(a.sigma().evaluate(gi, g))));
  }
  return out;
}

Cplx trace(const AlgebraElement& a) {
  return a.coefficient(a.model().identity()).trace();
}

Cplx inner(const VectorFS& f, const VectorFS& g) {
  Cplx s = 0.0;
  for (const auto& [x, v] : f.support()) s += g.at(x).dot(v);  // dot conjugates g
  return s;
}

VectorFS left_translate(const GroupModel& model, const Multiplier& sigma, const GroupElement& g,
                        const VectorFS& f) {
  VectorFS out(f.model(), f.block_size());
  for (const auto& [h, v] : f.support())
    out.add(multiply(model, g, h), BlockVector(v * sigma.evaluate(g, h)));
  return out;
}

VectorFS right_translate(const GroupModel& model, const Multiplier& sigma, const GroupElement& g,
                         const VectorFS& f) {
  const GroupElement gi = inverse(model, g);
  VectorFS out(f.model(), f.block_size());
  for (const auto& [h, v] : f.support()) {
    const GroupElement x = multiply(model, h, gi);  // xg = h
    out.add(x, BlockVector(v * sigma.evaluate(x, g)));
  }
  return out;
}

VectorFS u_conjugate(const GroupModel& model, const Multiplier& sigma, const VectorFS& f) {
  VectorFS out(f.model(), f.block_size());
  for (const auto& [h, v] : f.support()) {
    const GroupElement x = inverse(model, h);
    out.add(x, BlockVector(v * sigma.evaluate(x, h)));
  }
  return out;
}

VectorFS pointwise_multiply(const SMap& s, const VectorFS& f) {
  VectorFS out(f.model(), f.block_size());
  for (const auto& [h, v] : f.support()) out.add(h, BlockVector(v * s.eval(h)));
  return out;
}

AlgebraElement build_named_operator(const std::string& name, const GroupModel& model,
                                    const Multiplier& sigma, int d) {
  if (d < 1) throw domain_error("operator block size must be >= 1");
  const BlockMatrix id = BlockMatrix::Identity(d, d);

  if (name == "harper" || name == "dml") {
    // generating set must be symmetric
    const auto& gens = model.generators();
    for (const auto& g : gens) {
      const GroupElement gi = inverse(model, g);
      if (std::find(gens.begin(), gens.end(), gi) == gens.end())
        throw domain_error(name + ": generating set is not symmetric");
    }
    AlgebraElement a(model, sigma, d);
    for (const auto& g : gens) a.add(g, id);
    if (name == "dml") {
      AlgebraElement dml(model, sigma, d);
      dml.add(model.identity(), BlockMatrix(static_cast<double>(gens.size()) * id));
      for (const auto& [g, m] : a.support()) dml.add(g, BlockMatrix(-m));
      return dml;
    }
    return a;
  }

  if (name == "lamplighter_rw") {
    if (model.family() != Family::Lamplighter)
      throw domain_error("lamplighter_rw requires a lamplighter model");
    AlgebraElement a(model, sigma, d);
    const GroupElement t = GroupElement::lamplighter({}, 1);
    const GroupElement at = GroupElement::lamplighter({0}, 1);
    GroupElement tq = t, atq = at;
    if (model.has_quotient()) {
      tq = quotient_project(model, t);
      atq = quotient_project(model, at);
    }
    a.add(tq, id);
    a.add(atq, id);
    a.add(inverse(model, tq), id);
    a.add(inverse(model, atq), id);
    return a;
  }

  throw domain_error("unknown operator name: " + name);
}

ExtensionLift lift_to_extension(const AlgebraElement& a) {
  if (!a.sigma().is_rational())
    throw domain_error("lift_to_extension: multiplier is not rational");
  const std::int64_t r = *a.sigma().order();
  GroupModel ext = GroupModel::extension(a.model(), r, std::make_shared<const Multiplier>(a.sigma()));
  AlgebraElement lifted(ext, Multiplier::trivial(), a.block_size());
  for (const auto& [g, m] : a.support()) lifted.add(GroupElement::extension(0, g), m);
  return {std::move(ext), std::move(lifted)};
}

VectorFS xi_lift(const GroupModel& extension_model, const VectorFS& f) {
  if (extension_model.family() != Family::Extension)
    throw domain_error("xi_lift: not an extension model");
  const std::int64_t r = extension_model.ext_order();
  VectorFS out(extension_model, f.block_size());
  for (const auto& [g, v] : f.support())
    for (std::int64_t k = 0; k < r; ++k) {
      // conj(zeta^k) = zeta^{-k}
      const Cplx z = RationalAngle(-k, r).value();
      out.add(GroupElement::extension(k, g), BlockVector(v * z));
    }
  return out;
}

}  // namespace harper
