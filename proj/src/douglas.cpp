#include "obliq/douglas.hpp"

#include <algorithm>

namespace obliq {

namespace {

void check_shapes(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.size() == 0 || b.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "A and B must be nonempty with equal row counts");
  }
  require_finite(a, "A");
  require_finite(b, "B");
}

}  // namespace

bool range_inclusion(const Matrix& b, const Matrix& a, const Tolerance& tol,
                     double scale) {
  check_shapes(a, b);
  const Matrix a_pinv = moore_penrose(a, tol, scale);
  const Matrix outside = b - a * (a_pinv * b);
  return outside.norm() <= tol.eq_abs * std::max(b.norm(), scale);
}

ReducedSolution reduced_solution(const Matrix& a, const Matrix& b,
                                 const Tolerance& tol, double scale) {
  if (!range_inclusion(b, a, tol, scale)) {
    throw Error(ErrorCode::NoSolution, "R(B) is not contained in R(A)");
  }
  ReducedSolution out;
  out.d = moore_penrose(a, tol, scale) * b;
  out.residual = (a * out.d - b).norm();
  const double s = spectral_norm(out.d);
  out.norm_sq = s * s;
  return out;
}

ReducedSolution least_squares_solution(const Matrix& a, const Matrix& b,
                                       const Tolerance& tol) {
  check_shapes(a, b);
  ReducedSolution out;
  out.d = moore_penrose(a, tol) * b;
  out.residual = (a * out.d - b).norm();
  const double s = spectral_norm(out.d);
  out.norm_sq = s * s;
  out.least_squares = true;
  return out;
}

double minimal_lambda(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  const ReducedSolution sol = reduced_solution(a, b, tol);
  const Matrix row_proj = moore_penrose(a, tol) * a;
  const Matrix compressed = row_proj * sol.d * sol.d.transpose() * row_proj;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (compressed + compressed.transpose()),
                                            Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues().maxCoeff());
}

}  // namespace obliq
