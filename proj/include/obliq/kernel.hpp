#pragma once

// Dense real linear algebra substrate: tolerances, PSD weights, subspaces
// held as orthonormal bases, oblique projections, and the subspace algebra
// (sum, intersection, complement, preimage) used by every other module.

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "obliq/error.hpp"

namespace obliq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thresholds governing every numerical decision in the library.
///
/// `rank_rel` is the relative singular-value cutoff, `eq_abs` the absolute
/// threshold for matrix and vector equality, and `psd_neg` the magnitude of
/// negative eigenvalue noise that is clipped to zero. All three lie in (0, 1).
struct Tolerance {
  double rank_rel = 1e-10;
  double eq_abs = 1e-8;
  double psd_neg = 1e-10;

  /// Throws InvalidArgument unless every field is strictly inside (0, 1).
  void validate() const;
};

/// Throws InvalidArgument if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

/// Largest singular value; 0 for empty matrices.
double spectral_norm(const Matrix& m);

/// Count of singular values at or above `rank_rel * max(sigma_max, scale)`.
/// A zero matrix has rank 0. Passing `scale` (typically the norm of the
/// operator the matrix was derived from) keeps rounding noise in a
/// compressed block from being promoted to rank.
std::size_t numerical_rank(const Matrix& m, const Tolerance& tol,
                           double scale = 0.0);

/// Moore-Penrose pseudoinverse through the SVD with the same cutoff rule as
/// numerical_rank.
Matrix moore_penrose(const Matrix& w, const Tolerance& tol, double scale = 0.0);

/// A subspace of R^n stored as an orthonormal basis (n x k, k may be 0).
class Subspace {
 public:
  /// The zero subspace of R^n.
  explicit Subspace(std::size_t ambient_dim);

  /// Wraps a basis that is already orthonormal; checked within tol.eq_abs.
  /// The ambient dimension is basis.rows(), which must be positive.
  static Subspace from_orthonormal(Matrix basis, const Tolerance& tol = {});
  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  const Matrix& basis() const noexcept { return basis_; }

  bool is_zero() const noexcept { return dim() == 0; }
  bool is_full() const noexcept { return dim() == ambient_; }

  /// Orthogonal projector basis * basis^T.
  Matrix projector() const;

 private:
  std::size_t ambient_;
  Matrix basis_;
};

/// Canonical orthonormal basis of the column span (left singular vectors,
/// sign-normalised so the largest-magnitude entry of each column is positive).
Subspace canonical_span(const Matrix& vectors, const Tolerance& tol,
                        double scale);

Subspace subspace_from_span(const Matrix& vectors, const Tolerance& tol);

/// Orthonormal basis of N(m), with the cutoff taken relative to
/// max(sigma_max(m), scale).
Subspace nullspace(const Matrix& m, const Tolerance& tol, double scale = 0.0);

Subspace complement(const Subspace& s);
Subspace sum(const Subspace& s1, const Subspace& s2, const Tolerance& tol);
Subspace intersect(const Subspace& s1, const Subspace& s2, const Tolerance& tol);

/// S minus N, i.e. S intersected with the orthogonal complement of N.
/// Throws NotContained unless N is a subspace of S.
Subspace subtract(const Subspace& s, const Subspace& n, const Tolerance& tol);

/// {x : W x in S}, computed as the nullspace of P_{S-perp} W.
Subspace preimage(const Matrix& w, const Subspace& s, const Tolerance& tol);

/// Image W(S) = span of W * basis(S), with cutoff relative to ||W||.
Subspace image(const Matrix& w, const Subspace& s, const Tolerance& tol);

/// s2 is contained in s1: ||(I - P_1) B_2||_F <= eq_abs * n.
bool contains(const Subspace& s1, const Subspace& s2, const Tolerance& tol);

/// Basis-independent equality: equal dimension and ||P_1 - P_2||_F <= eq_abs * n.
bool equal(const Subspace& s1, const Subspace& s2, const Tolerance& tol);

/// Cosine of the Friedrichs angle (intersection removed). 0 when either
/// subspace is contained in the other.
double friedrichs_angle(const Subspace& s1, const Subspace& s2,
                        const Tolerance& tol);

/// An idempotent operator together with its range and nullspace.
class ObliqueProjection {
 public:
  ObliqueProjection(Matrix matrix, Subspace range, Subspace nullspace);

  /// Builds range and nullspace from the matrix itself. Throws
  /// InvalidArgument if the matrix is not idempotent within eq_abs.
  static ObliqueProjection from_matrix(Matrix matrix, const Tolerance& tol);

  const Matrix& matrix() const noexcept { return matrix_; }
  const Subspace& range() const noexcept { return range_; }
  const Subspace& nullspace() const noexcept { return null_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  Matrix matrix_;
  Subspace range_;
  Subspace null_;
};

ObliqueProjection ortho_projector(const Subspace& s);

/// Symmetric positive semidefinite weight A with cached spectral data.
///
/// Eigenvalues below the rank cutoff are treated as exact zeros in every
/// derived operator (square root, pseudoinverses, range projector), so all
/// of them agree on one numerical rank.
class PsdOperator {
 public:
  /// Throws InvalidArgument for non-square, non-finite or non-symmetric
  /// input and NotPsd for eigenvalues below -psd_neg * max(1, ||A||).
  PsdOperator(const Matrix& a, const Tolerance& tol = {});

  std::size_t dim() const noexcept { return static_cast<std::size_t>(base_.rows()); }
  std::size_t rank() const noexcept { return rank_; }
  bool full_rank() const noexcept { return rank_ == dim(); }

  const Matrix& base() const noexcept { return base_; }
  /// Descending, clipped at zero.
  const Vector& eigvals() const noexcept { return eigvals_; }
  /// Columns ordered like eigvals().
  const Matrix& eigvecs() const noexcept { return eigvecs_; }
  const Matrix& sqrt() const noexcept { return sqrt_; }
  const Matrix& pinv() const noexcept { return pinv_; }
  const Matrix& sqrt_pinv() const noexcept { return sqrt_pinv_; }
  const Matrix& range_proj() const noexcept { return range_proj_; }
  /// The weight rebuilt from its retained spectrum; differs from base() only
  /// by eigenvalues below the rank cutoff.
  const Matrix& effective() const noexcept { return effective_; }

  double norm() const noexcept { return eigvals_.size() ? eigvals_(0) : 0.0; }

  Subspace range() const;
  Subspace kernel() const;

 private:
  Matrix base_;
  Vector eigvals_;
  Matrix eigvecs_;
  std::size_t rank_ = 0;
  Matrix sqrt_;
  Matrix pinv_;
  Matrix sqrt_pinv_;
  Matrix range_proj_;
  Matrix effective_;
};

}  // namespace obliq
