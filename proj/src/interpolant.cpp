#include "obliq/interpolant.hpp"

#include <algorithm>
#include <cmath>

#include "obliq/oblique.hpp"

namespace obliq {

namespace {

void check_problem(const Matrix& t, const Subspace& s, const Vector& x) {
  const auto n = static_cast<Eigen::Index>(s.ambient_dim());
  if (t.cols() != n || x.size() != n || t.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "factor, subspace and vector dimensions disagree");
  }
  require_finite(t, "factor");
  if (!x.allFinite()) throw Error(ErrorCode::InvalidArgument, "x is not finite");
}

// `factor` is any F with F^T F = A; the value is |F z|, which keeps full
// precision near zero where sqrt(z^T A z) does not.
SplineResult solve(const PsdOperator& a, const Matrix& factor, const Subspace& s,
                   const Vector& x, const Tolerance& tol) {
  const ObliqueProjection p = pas(a, s, tol);
  SplineResult out{x - p.matrix() * x, 0.0, false, degenerate_part(a, s, tol)};
  out.value = (factor * out.minimizer).norm();
  out.unique = out.solution_directions.is_zero();
  return out;
}

}  // namespace

double seminorm(const PsdOperator& a, const Vector& x, const Tolerance& tol) {
  if (static_cast<std::size_t>(x.size()) != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length differs from weight");
  }
  const double q = x.dot(a.base() * x);
  if (q < -tol.psd_neg * std::max(1.0, a.norm() * x.squaredNorm())) {
    throw Error(ErrorCode::NotPsd, "negative quadratic form");
  }
  return std::sqrt(std::max(q, 0.0));
}

SplineResult spline(const Matrix& t_factor, const Subspace& s, const Vector& x,
                    const Tolerance& tol) {
  check_problem(t_factor, s, x);
  const Matrix gram = t_factor.transpose() * t_factor;
  return solve(PsdOperator(gram, tol), t_factor, s, x, tol);
}

SplineResult spline(const PsdOperator& a, const Subspace& s, const Vector& x,
                    const Tolerance& tol) {
  check_problem(a.sqrt(), s, x);
  return solve(a, a.sqrt(), s, x, tol);
}

Vector spline_oracle(const Matrix& t_factor, const Subspace& s, const Vector& x,
                     const Tolerance& tol) {
  check_problem(t_factor, s, x);
  if (s.is_zero()) return x;
  const Matrix ts = t_factor * s.basis();
  const Matrix normal = ts.transpose() * ts;
  const double scale = spectral_norm(t_factor);
  const Vector c = -moore_penrose(normal, tol, scale * scale) * (ts.transpose() * (t_factor * x));
  const Vector z = x + s.basis() * c;
  // Optimal set is z + B_S null(T B_S); drop z's component along it.
  const Subspace flat = nullspace(normal, tol, scale * scale);
  if (flat.is_zero()) return z;
  const Matrix dirs = s.basis() * flat.basis();
  return z - dirs * (dirs.transpose() * z);
}

}  // namespace obliq
