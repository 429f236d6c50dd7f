#pragma once

// Minimal-seminorm interpolation: minimise |x + s|_A over s in S for a weight
// A = T^T T, and pick the Euclidean-minimal optimiser (I - P_{A,S}) x.

#include "obliq/kernel.hpp"

namespace obliq {

/// |x|_A = <A x, x>^{1/2}. Throws NotPsd if <A x, x> is below
/// -psd_neg * max(1, ||A|| ||x||^2); smaller negative noise clips to 0.
double seminorm(const PsdOperator& a, const Vector& x, const Tolerance& tol = {});

struct SplineResult {
  Vector minimizer;       ///< (I - P_{A,S}) x
  double value = 0.0;     ///< |minimizer|_A
  bool unique = false;    ///< S cap N(A) = {0}
  /// Every optimiser is minimizer + v for v in this subspace (= S cap N(A)).
  Subspace solution_directions;
};

/// Interpolant for the factor T (m x n). Throws DimensionMismatch.
SplineResult spline(const Matrix& t_factor, const Subspace& s, const Vector& x,
                    const Tolerance& tol);

/// Same problem for a weight given directly, with T = A^{1/2}.
SplineResult spline(const PsdOperator& a, const Subspace& s, const Vector& x,
                    const Tolerance& tol);

/// Independent reference: solves min_c ||T (x + B_S c)||^2 through the normal
/// equations, then removes the component of x + B_S c along the optimal
/// directions to select the Euclidean-minimal optimiser.
Vector spline_oracle(const Matrix& t_factor, const Subspace& s, const Vector& x,
                     const Tolerance& tol);

}  // namespace obliq
