#pragma once

// The Hilbert space B(A^{1/2}): R(A^{1/2}) with the inner product that makes
// A^{1/2} a coisometry. A vector u of that space is represented isometrically
// by its minimal-norm preimage w = (A^{1/2})^+ u, the "witness". Operators on
// B(A^{1/2}) become n x n matrices acting on witnesses (zero on N(A)).

#include <memory>

#include "obliq/kernel.hpp"

namespace obliq {

using WeightPtr = std::shared_ptr<const PsdOperator>;

struct Membership {
  bool in_range = false;       ///< u in R(A)
  bool in_sqrt_range = false;  ///< u in R(A^{1/2}) via A^{1/2} w = u
  double range_residual = 0.0;
  double sqrt_residual = 0.0;
};

/// Both membership tests, kept apart so disagreement near a rank boundary
/// is visible to the caller.
Membership membership(const PsdOperator& a, const Vector& u, const Tolerance& tol);

struct RangeVector {
  WeightPtr weight;
  Vector ambient;
  Vector witness;
};

/// Throws NotInRange unless u passes both membership tests.
RangeVector lift(WeightPtr a, const Vector& u, const Tolerance& tol);

/// Inner product of B(A^{1/2}). Throws WeightMismatch for different weights.
double range_inner(const RangeVector& x, const RangeVector& y);
double range_norm(const RangeVector& x);

/// Witness coordinates (A^{1/2})^+ u, without the membership gate.
Vector chart(const PsdOperator& a, const Vector& u);

/// The orthogonal projection Q_{A,S} of B(A^{1/2}) onto the closure of A(S),
/// written in witness coordinates.
struct RangeSpaceProjection {
  WeightPtr weight;
  Subspace target;
  Matrix coord_matrix;
  Subspace range_image;  ///< chart of A(S) = A^{1/2}(S)
  Subspace null_image;   ///< chart of S-perp intersected with R(A)

  /// Q_{A,S} as a map on ambient coordinates of R(A^{1/2}).
  Matrix ambient_matrix() const;
};

RangeSpaceProjection qas(WeightPtr a, const Subspace& s, const Tolerance& tol);
RangeSpaceProjection qas(const PsdOperator& a, const Subspace& s, const Tolerance& tol);

RangeVector apply(const RangeSpaceProjection& q, const RangeVector& v);

/// The operator B~ on B(A^{1/2}) with B~ A = A B, in witness coordinates.
struct ThetaResult {
  Matrix chart;
  bool kernel_invariant = false;  ///< B(N(A)) inside N(A)
  bool bounded = false;           ///< R(B^T A^{1/2}) inside R(A^{1/2})
};

/// Throws NotExtendable when B does not leave N(A) invariant. The boundedness
/// condition is automatic in finite dimension and only reported.
ThetaResult theta(const PsdOperator& a, const Matrix& b, const Tolerance& tol);

/// theta(P_{A,S}) == Q_{A,S}. Propagates Incompatible from pas.
bool theta_pas_identity(const PsdOperator& a, const Subspace& s, const Tolerance& tol);

struct RangeImage {
  Subspace image;        ///< Q_{A,S}(R(A)) in ambient coordinates
  bool equals_image_of_s = false;
};
RangeImage qas_range_image(const PsdOperator& a, const Subspace& s, const Tolerance& tol);

/// A^# Q_{A,S} A as an ambient n x n matrix.
Matrix sharp_projection(const PsdOperator& a, const Subspace& s, const Tolerance& tol);

/// The closure of S-perp cap R(A) is the B(A^{1/2})-complement of A(S)
/// iff A(S) + S-perp cap R(A) is dense. Returns the common truth value and
/// throws IdentityViolation if the two sides disagree.
bool dense_sum_check(const PsdOperator& a, const Subspace& s, const Tolerance& tol);

/// Three equivalent characterisations of compatibility.
struct CompatibilityForms {
  bool compatible = false;          ///< the pair itself
  bool sqrt_decomposition = false;  ///< A^{1/2}(S) + A^{1/2}(S)-perp cap R = R(A^{1/2})
  bool range_decomposition = false; ///< R(A) = M cap R(A) + M-perp' cap R(A), A(S) closed
  bool all_equal() const {
    return compatible == sqrt_decomposition && sqrt_decomposition == range_decomposition;
  }
};
CompatibilityForms compatibility_forms(const PsdOperator& a, const Subspace& s,
                                       const Tolerance& tol);

}  // namespace obliq
