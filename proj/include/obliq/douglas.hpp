#pragma once

// Operator equations A X = B: range inclusion, the reduced solution and the
// optimal constant of the majorization B B^T <= lambda A A^T.

#include "obliq/kernel.hpp"

namespace obliq {

/// The unique solution D of A X = B with R(D) inside R(A^T) and N(D) = N(B).
struct ReducedSolution {
  Matrix d;
  double norm_sq = 0.0;   ///< squared spectral norm of d
  double residual = 0.0;  ///< ||A d - B||_F
  /// Set when produced by the least-squares fallback; such a d need not
  /// solve the equation at all.
  bool least_squares = false;
};

/// R(B) inside R(A): ||(I - A A^+) B||_F <= eq_abs * max(||B||_F, scale).
/// `scale` lets callers that work with compressed blocks of a larger
/// operator accept rounding noise at that operator's size.
bool range_inclusion(const Matrix& b, const Matrix& a, const Tolerance& tol,
                     double scale = 0.0);

/// D = A^+ B. Throws NoSolution when the range inclusion fails; near-feasible
/// systems are rejected rather than solved in the least-squares sense.
ReducedSolution reduced_solution(const Matrix& a, const Matrix& b,
                                 const Tolerance& tol, double scale = 0.0);

/// A^+ B without the feasibility gate. The result minimises ||A X - B||_F
/// and is flagged as least-squares.
ReducedSolution least_squares_solution(const Matrix& a, const Matrix& b,
                                       const Tolerance& tol);

/// inf{lambda : lambda A A^T - B B^T is PSD}, read off the reduced solution
/// as the top eigenvalue of D D^T compressed to R(A^T).
double minimal_lambda(const Matrix& a, const Matrix& b, const Tolerance& tol);

}  // namespace obliq
