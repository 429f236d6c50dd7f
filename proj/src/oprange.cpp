#include "obliq/oprange.hpp"

#include <algorithm>
#include <cmath>

#include "obliq/douglas.hpp"
#include "obliq/oblique.hpp"

namespace obliq {

namespace {

void require_vector(const PsdOperator& a, const Vector& u) {
  if (static_cast<std::size_t>(u.size()) != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length differs from weight");
  }
  if (!u.allFinite()) throw Error(ErrorCode::InvalidArgument, "vector is not finite");
}

void require_dims(const PsdOperator& a, const Subspace& s) {
  if (a.dim() != s.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "weight and subspace dimensions differ");
  }
}

bool same_weight(const WeightPtr& x, const WeightPtr& y) {
  if (!x || !y) return false;
  if (x == y) return true;
  return x->base().rows() == y->base().rows() && x->base() == y->base();
}

}  // namespace

Membership membership(const PsdOperator& a, const Vector& u, const Tolerance& tol) {
  require_vector(a, u);
  const double bound = tol.eq_abs * (1.0 + u.norm());
  Membership m;
  m.range_residual = (u - a.range_proj() * u).norm();
  m.sqrt_residual = (a.sqrt() * (a.sqrt_pinv() * u) - u).norm();
  m.in_range = m.range_residual <= bound;
  m.in_sqrt_range = m.sqrt_residual <= bound;
  return m;
}

RangeVector lift(WeightPtr a, const Vector& u, const Tolerance& tol) {
  if (!a) throw Error(ErrorCode::InvalidArgument, "missing weight");
  const Membership m = membership(*a, u, tol);
  if (!m.in_range || !m.in_sqrt_range) {
    throw Error(ErrorCode::NotInRange, "vector is not in the range of the weight");
  }
  Vector w = a->sqrt_pinv() * u;
  return RangeVector{std::move(a), u, std::move(w)};
}

double range_inner(const RangeVector& x, const RangeVector& y) {
  if (!same_weight(x.weight, y.weight)) {
    throw Error(ErrorCode::WeightMismatch, "range vectors belong to different weights");
  }
  return x.witness.dot(y.witness);
}

double range_norm(const RangeVector& x) { return x.witness.norm(); }

Vector chart(const PsdOperator& a, const Vector& u) {
  require_vector(a, u);
  return a.sqrt_pinv() * u;
}

Matrix RangeSpaceProjection::ambient_matrix() const {
  return weight->sqrt() * coord_matrix * weight->sqrt_pinv();
}

RangeSpaceProjection qas(WeightPtr a, const Subspace& s, const Tolerance& tol) {
  if (!a) throw Error(ErrorCode::InvalidArgument, "missing weight");
  require_dims(*a, s);
  Subspace range_image = image(a->sqrt(), s, tol);
  const Subspace perp_in_range = intersect(complement(s), a->range(), tol);
  Subspace null_image = image(a->sqrt_pinv(), perp_in_range, tol);
  Matrix coords = range_image.projector();
  return RangeSpaceProjection{std::move(a), s, std::move(coords),
                              std::move(range_image), std::move(null_image)};
}

RangeSpaceProjection qas(const PsdOperator& a, const Subspace& s, const Tolerance& tol) {
  return qas(std::make_shared<const PsdOperator>(a), s, tol);
}

RangeVector apply(const RangeSpaceProjection& q, const RangeVector& v) {
  if (!same_weight(q.weight, v.weight)) {
    throw Error(ErrorCode::WeightMismatch, "projection and vector use different weights");
  }
  Vector w = q.coord_matrix * v.witness;
  Vector u = q.weight->sqrt() * w;
  return RangeVector{q.weight, std::move(u), std::move(w)};
}

ThetaResult theta(const PsdOperator& a, const Matrix& b, const Tolerance& tol) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  if (b.rows() != n || b.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "B must be n x n");
  }
  require_finite(b, "B");
  ThetaResult out;
  const Subspace kernel = a.kernel();
  const double b_norm = spectral_norm(b);
  if (kernel.is_zero()) {
    out.kernel_invariant = true;
  } else {
    const double leak = (a.range_proj() * b * kernel.basis()).norm();
    out.kernel_invariant = leak <= tol.eq_abs * (1.0 + b_norm);
  }
  if (!out.kernel_invariant) {
    throw Error(ErrorCode::NotExtendable, "B does not leave N(A) invariant");
  }
  const Matrix& root = a.sqrt();
  out.bounded = a.rank() == 0 ||
                range_inclusion(b.transpose() * root, root, tol, std::sqrt(a.norm()) * b_norm);
  out.chart = root * b * a.sqrt_pinv();
  return out;
}

bool theta_pas_identity(const PsdOperator& a, const Subspace& s, const Tolerance& tol) {
  const ObliqueProjection p = pas(a, s, tol);
  const ThetaResult t = theta(a, p.matrix(), tol);
  const RangeSpaceProjection q = qas(a, s, tol);
  const double bound = 10.0 * tol.eq_abs * std::max(1.0, spectral_norm(p.matrix()));
  return (t.chart - q.coord_matrix).norm() <= bound;
}

RangeImage qas_range_image(const PsdOperator& a, const Subspace& s, const Tolerance& tol) {
  const RangeSpaceProjection q = qas(a, s, tol);
  Subspace img = image(q.ambient_matrix(), a.range(), tol);
  const bool eq = equal(img, image(a.effective(), s, tol), tol);
  return RangeImage{std::move(img), eq};
}

Matrix sharp_projection(const PsdOperator& a, const Subspace& s, const Tolerance& tol) {
  const RangeSpaceProjection q = qas(a, s, tol);
  return a.pinv() * q.ambient_matrix() * a.effective();
}

bool dense_sum_check(const PsdOperator& a, const Subspace& s, const Tolerance& tol) {
  const RangeSpaceProjection q = qas(a, s, tol);
  const Subspace range = a.range();
  const Subspace chart_perp = subtract(range, q.range_image, tol);
  const bool closure_side = equal(q.null_image, chart_perp, tol);
  const bool dense_side = equal(sum(q.range_image, q.null_image, tol), range, tol);
  if (closure_side != dense_side) {
    throw Error(ErrorCode::IdentityViolation,
                "closure of S-perp cap R(A) and density of the sum disagree");
  }
  return dense_side;
}

CompatibilityForms compatibility_forms(const PsdOperator& a, const Subspace& s,
                                       const Tolerance& tol) {
  require_dims(a, s);
  CompatibilityForms out;
  out.compatible = is_compatible(a, s, tol);

  const Subspace root_range = canonical_span(a.sqrt(), tol, std::sqrt(a.norm()));
  const Subspace root_s = image(a.sqrt(), s, tol);
  const Subspace t = intersect(complement(root_s), root_range, tol);
  out.sqrt_decomposition = equal(sum(root_s, t, tol), root_range, tol);

  const Subspace range = a.range();
  const RangeSpaceProjection q = qas(a, s, tol);
  const Subspace m = image(a.sqrt(), q.range_image, tol);
  const Subspace m_perp = intersect(complement(s), range, tol);
  const Subspace m_in_range = intersect(m, range, tol);
  const bool splits =
      equal(sum(m_in_range, intersect(m_perp, range, tol), tol), range, tol);
  const bool closed = equal(m_in_range, image(a.effective(), s, tol), tol);
  out.range_decomposition = splits && closed;
  return out;
}

}  // namespace obliq
