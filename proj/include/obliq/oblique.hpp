#pragma once

// A-self-adjoint projections onto a subspace S for a PSD weight A:
// compatibility, the distinguished projection P_{A,S} (three independent
// constructions), the affine family of A-Hermitian projections with range S,
// Krein's criterion, and the closedness diagnostics for the pair.

#include <array>
#include <optional>

#include "obliq/kernel.hpp"

namespace obliq {

/// A written in the frame (B_S, B_{S-perp}):  [[a, b], [b^T, c]].
struct BlockDecomposition {
  Matrix a;  ///< k x k
  Matrix b;  ///< k x (n-k)
  Matrix c;  ///< (n-k) x (n-k)
  Subspace s;
  Subspace s_perp;
};

BlockDecomposition block_decompose(const PsdOperator& a, const Subspace& s);

/// Reassembles B_S a B_S^T + B_S b B_perp^T + ... back to an n x n matrix.
Matrix reassemble(const BlockDecomposition& blocks);

/// Projection with range S whose frame representation is [[I, x], [0, 0]].
/// `x` is k x (n-k).
ObliqueProjection frame_projection(const Subspace& s, const Matrix& x,
                                   const Tolerance& tol = {});

/// N = S intersected with N(A), read from the nullspace of the a-block so it
/// agrees with the rank decisions of the Douglas step.
Subspace degenerate_part(const PsdOperator& a, const Subspace& s,
                         const Tolerance& tol);

/// R(b) inside R(a) for the block decomposition.
bool is_compatible(const PsdOperator& a, const Subspace& s, const Tolerance& tol);

/// S + A^{-1}(S-perp) is the whole space.
bool direct_sum_check(const PsdOperator& a, const Subspace& s, const Tolerance& tol);

/// P_{A,S} = [[I, d], [0, 0]] with d the reduced solution of a X = b.
/// Nullspace A^{-1}(S-perp) minus N. Throws Incompatible if a X = b has no
/// solution under tol.
ObliqueProjection pas(const PsdOperator& a, const Subspace& s, const Tolerance& tol);

/// P (P A P + (I-P) A (I-P))^{-1} A. Throws Singular unless A has full rank.
ObliqueProjection pas_invertible(const PsdOperator& a, const Subspace& s,
                                 const Tolerance& tol);

/// (P A P)^+ P A + P_N.
ObliqueProjection pas_closed_range(const PsdOperator& a, const Subspace& s,
                                   const Tolerance& tol);

/// Both reduced-solution forms of P_{A,S} - P_N: from (PAP) X = PA and from
/// (A^{1/2} P) X = P_M A^{1/2} with M = A^{1/2}(S).
struct ReducedForms {
  Matrix from_compression;
  Matrix from_sqrt;
};
ReducedForms reduced_forms(const PsdOperator& a, const Subspace& s,
                           const Tolerance& tol);

struct KreinVerdict {
  bool algebraic = false;    ///< A Q = Q^T A
  bool containment = false;  ///< N(Q) inside A^{-1}(S-perp)
  double hermitian_error = 0.0;
  double containment_error = 0.0;
};

/// Both sides of Krein's criterion. Throws RangeMismatch if R(Q) != S.
KreinVerdict krein_details(const ObliqueProjection& q, const PsdOperator& a,
                           const Subspace& s, const Tolerance& tol);

/// A-Hermitian test. Throws IdentityViolation if the algebraic and the
/// containment forms of the test disagree.
bool krein_check(const ObliqueProjection& q, const PsdOperator& a,
                 const Subspace& s, const Tolerance& tol);

/// P_{A,S} + B_N t B_{S-perp}^T, with t given in (S-perp -> N) coordinates,
/// i.e. dim N x (n - dim S).
ObliqueProjection family_member(const PsdOperator& a, const Subspace& s,
                                const Matrix& t, const Tolerance& tol);

/// Closedness conditions for the pair. In exact finite-dimensional arithmetic
/// every flag holds; a false flag marks a numerically ill-posed input.
struct ChainFlags {
  bool compatible = false;                 // 1
  bool image_closed_in_range = false;      // 2: cl A(S) cap R(A) = A(S)
  bool preimage_of_image = false;          // 3: A^{-1}(cl A(S)) = S + N(A)
  bool sqrt_image_closed_in_range = false; // 4: same for A^{1/2}
  bool sum_with_kernel_closed = false;     // 5: S + N(A)
  bool range_projection_closed = false;    // 6: P_{R(A)}(S)

  std::array<bool, 6> as_array() const {
    return {compatible, image_closed_in_range, preimage_of_image,
            sqrt_image_closed_in_range, sum_with_kernel_closed,
            range_projection_closed};
  }
  /// 1 -> 2 -> 4 -> 5, 2 <-> 3, 5 <-> 6.
  bool implications_hold() const;
};

struct CompatibilityReport {
  bool compatible = false;
  bool sum_check = false;
  Subspace n;
  Subspace preimage_perp;
  Matrix d;                             ///< reduced solution of a X = b
  std::optional<ObliqueProjection> pas;  ///< absent when incompatible
  ChainFlags chain;
  /// Compatibility of (A, P_{R(A)}(S)) and of (A, W) for a W with the same
  /// projection onto R(A).
  bool projected_compatible = false;
  bool shifted_compatible = false;
};

CompatibilityReport diagnostics_chain(const PsdOperator& a, const Subspace& s,
                                      const Tolerance& tol);

}  // namespace obliq
