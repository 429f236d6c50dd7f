#include "obliq/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace obliq {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NotContained: return "NotContained";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::Incompatible: return "Incompatible";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::RangeMismatch: return "RangeMismatch";
    case ErrorCode::NotInRange: return "NotInRange";
    case ErrorCode::NotExtendable: return "NotExtendable";
    case ErrorCode::WeightMismatch: return "WeightMismatch";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
  }
  return "Unknown";
}

namespace {

// Flip each column so that its largest-magnitude entry is positive. Pins the
// sign ambiguity of SVD/eigen bases so frames are reproducible.
void normalize_signs(Matrix& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index arg = 0;
    basis.col(j).cwiseAbs().maxCoeff(&arg);
    if (basis(arg, j) < 0.0) basis.col(j) *= -1.0;
  }
}

double cutoff(double sigma_max, const Tolerance& tol, double scale) {
  return tol.rank_rel * std::max(sigma_max, scale);
}

std::size_t count_above(const Vector& sigma, double cut) {
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > 0.0 && sigma(i) >= cut) ++r;
  }
  return r;
}

}  // namespace

void Tolerance::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; };
  if (!ok(rank_rel) || !ok(eq_abs) || !ok(psd_neg)) {
    throw Error(ErrorCode::InvalidArgument,
                "tolerances must lie strictly inside (0, 1)");
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " has non-finite entries");
  }
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

std::size_t numerical_rank(const Matrix& m, const Tolerance& tol, double scale) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sigma = svd.singularValues();
  return count_above(sigma, cutoff(sigma(0), tol, scale));
}

Matrix moore_penrose(const Matrix& w, const Tolerance& tol, double scale) {
  Matrix out = Matrix::Zero(w.cols(), w.rows());
  if (w.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const std::size_t r = count_above(sigma, cutoff(sigma(0), tol, scale));
  for (std::size_t i = 0; i < r; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out.noalias() += svd.matrixV().col(k) * (1.0 / sigma(k)) *
                     svd.matrixU().col(k).transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subspace

Subspace::Subspace(std::size_t ambient_dim)
    : ambient_(ambient_dim),
      basis_(Matrix::Zero(static_cast<Eigen::Index>(ambient_dim), 0)) {
  if (ambient_dim == 0) {
    throw Error(ErrorCode::InvalidArgument, "ambient dimension must be positive");
  }
}

Subspace Subspace::from_orthonormal(Matrix basis, const Tolerance& tol) {
  require_finite(basis, "subspace basis");
  Subspace s(static_cast<std::size_t>(basis.rows()));
  if (basis.cols() > basis.rows()) {
    throw Error(ErrorCode::InvalidArgument, "more basis vectors than dimensions");
  }
  const Matrix gram = basis.transpose() * basis;
  const Matrix eye = Matrix::Identity(basis.cols(), basis.cols());
  if ((gram - eye).norm() > tol.eq_abs) {
    throw Error(ErrorCode::InvalidArgument, "basis is not orthonormal");
  }
  s.basis_ = std::move(basis);
  return s;
}

Subspace Subspace::full(std::size_t ambient_dim) {
  const auto n = static_cast<Eigen::Index>(ambient_dim);
  return from_orthonormal(Matrix::Identity(n, n));
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

Subspace canonical_span(const Matrix& vectors, const Tolerance& tol,
                        double scale) {
  const auto n = static_cast<std::size_t>(vectors.rows());
  if (vectors.cols() == 0) return Subspace(n);
  require_finite(vectors, "span vectors");
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  const auto r = static_cast<Eigen::Index>(
      count_above(sigma, cutoff(sigma(0), tol, scale)));
  Matrix basis = svd.matrixU().leftCols(r);
  normalize_signs(basis);
  return Subspace::from_orthonormal(std::move(basis));
}

Subspace subspace_from_span(const Matrix& vectors, const Tolerance& tol) {
  return canonical_span(vectors, tol, 0.0);
}

Subspace nullspace(const Matrix& m, const Tolerance& tol, double scale) {
  const auto n = static_cast<std::size_t>(m.cols());
  if (m.rows() == 0) return Subspace::full(n);
  require_finite(m, "operator");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const auto r = static_cast<Eigen::Index>(
      count_above(sigma, cutoff(sigma(0), tol, scale)));
  Matrix basis = svd.matrixV().rightCols(m.cols() - r);
  normalize_signs(basis);
  return Subspace::from_orthonormal(std::move(basis));
}

Subspace complement(const Subspace& s) {
  const std::size_t n = s.ambient_dim();
  if (s.is_zero()) return Subspace::full(n);
  if (s.is_full()) return Subspace(n);
  Eigen::JacobiSVD<Matrix> svd(s.basis(), Eigen::ComputeFullU);
  Matrix basis = svd.matrixU().rightCols(static_cast<Eigen::Index>(n - s.dim()));
  normalize_signs(basis);
  return Subspace::from_orthonormal(std::move(basis));
}

namespace {
void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "subspaces live in different spaces");
  }
}
}  // namespace

Subspace sum(const Subspace& s1, const Subspace& s2, const Tolerance& tol) {
  require_same_ambient(s1, s2);
  Matrix joined(s1.basis().rows(), s1.basis().cols() + s2.basis().cols());
  joined << s1.basis(), s2.basis();
  return canonical_span(joined, tol, 1.0);
}

Subspace intersect(const Subspace& s1, const Subspace& s2, const Tolerance& tol) {
  require_same_ambient(s1, s2);
  return complement(sum(complement(s1), complement(s2), tol));
}

Subspace subtract(const Subspace& s, const Subspace& n, const Tolerance& tol) {
  require_same_ambient(s, n);
  if (!contains(s, n, tol)) {
    throw Error(ErrorCode::NotContained, "subtracted subspace is not contained");
  }
  if (n.is_zero()) return s;
  const auto keep = static_cast<Eigen::Index>(s.dim() - n.dim());
  if (keep == 0) return Subspace(s.ambient_dim());
  // The dimension is fixed by containment, so keep exactly the top directions.
  const Matrix residual = s.basis() - n.projector() * s.basis();
  Eigen::JacobiSVD<Matrix> svd(residual, Eigen::ComputeThinU);
  Matrix basis = svd.matrixU().leftCols(keep);
  normalize_signs(basis);
  return Subspace::from_orthonormal(std::move(basis));
}

Subspace preimage(const Matrix& w, const Subspace& s, const Tolerance& tol) {
  if (w.rows() != w.cols() ||
      static_cast<std::size_t>(w.rows()) != s.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "preimage needs square W matching S");
  }
  require_finite(w, "W");
  const Matrix perp_w = w - s.projector() * w;
  return nullspace(perp_w, tol, spectral_norm(w));
}

Subspace image(const Matrix& w, const Subspace& s, const Tolerance& tol) {
  if (static_cast<std::size_t>(w.cols()) != s.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "image needs W with n columns");
  }
  if (s.is_zero()) return Subspace(static_cast<std::size_t>(w.rows()));
  return canonical_span(w * s.basis(), tol, spectral_norm(w));
}

bool contains(const Subspace& s1, const Subspace& s2, const Tolerance& tol) {
  require_same_ambient(s1, s2);
  if (s2.is_zero()) return true;
  const Matrix residual = s2.basis() - s1.basis() * (s1.basis().transpose() * s2.basis());
  return residual.norm() <= tol.eq_abs * static_cast<double>(s1.ambient_dim());
}

bool equal(const Subspace& s1, const Subspace& s2, const Tolerance& tol) {
  require_same_ambient(s1, s2);
  if (s1.dim() != s2.dim()) return false;
  return (s1.projector() - s2.projector()).norm() <=
         tol.eq_abs * static_cast<double>(s1.ambient_dim());
}

double friedrichs_angle(const Subspace& s1, const Subspace& s2,
                        const Tolerance& tol) {
  const Subspace common = intersect(s1, s2, tol);
  const Subspace r1 = subtract(s1, common, tol);
  const Subspace r2 = subtract(s2, common, tol);
  if (r1.is_zero() || r2.is_zero()) return 0.0;
  const double c = spectral_norm(r1.basis().transpose() * r2.basis());
  return std::clamp(c, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// ObliqueProjection

ObliqueProjection::ObliqueProjection(Matrix matrix, Subspace range,
                                     Subspace nullspace)
    : matrix_(std::move(matrix)), range_(std::move(range)), null_(std::move(nullspace)) {
  const auto n = static_cast<std::size_t>(matrix_.rows());
  if (matrix_.rows() != matrix_.cols() || range_.ambient_dim() != n ||
      null_.ambient_dim() != n || range_.dim() + null_.dim() != n) {
    throw Error(ErrorCode::InvalidArgument,
                "projection range and nullspace must split the space");
  }
  const double bound = Tolerance{}.eq_abs * (1.0 + matrix_.norm());
  if ((matrix_ * range_.basis() - range_.basis()).norm() > bound ||
      (matrix_ * null_.basis()).norm() > bound) {
    throw Error(ErrorCode::InvalidArgument,
                "matrix does not fix its range or annihilate its nullspace");
  }
}

ObliqueProjection ObliqueProjection::from_matrix(Matrix matrix, const Tolerance& tol) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "projection must be square");
  }
  require_finite(matrix, "projection");
  if ((matrix * matrix - matrix).norm() > tol.eq_abs * (1.0 + matrix.norm())) {
    throw Error(ErrorCode::InvalidArgument, "matrix is not idempotent");
  }
  // Nonzero singular values of an idempotent are >= 1, so a unit scale
  // separates range from nullspace robustly.
  Subspace range = canonical_span(matrix, tol, 1.0);
  Subspace null = obliq::nullspace(matrix, tol, 1.0);
  return ObliqueProjection(std::move(matrix), std::move(range), std::move(null));
}

ObliqueProjection ortho_projector(const Subspace& s) {
  return ObliqueProjection(s.projector(), s, complement(s));
}

// ---------------------------------------------------------------------------
// PsdOperator

PsdOperator::PsdOperator(const Matrix& a, const Tolerance& tol) {
  tol.validate();
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "weight must be square and nonempty");
  }
  require_finite(a, "weight");
  const double fro = a.norm();
  if ((a - a.transpose()).norm() > tol.eq_abs * std::max(1.0, fro)) {
    throw Error(ErrorCode::InvalidArgument, "weight is not symmetric");
  }
  base_ = 0.5 * (a + a.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(base_);
  const Eigen::Index n = base_.rows();
  eigvals_ = eig.eigenvalues().reverse();
  eigvecs_ = eig.eigenvectors().rowwise().reverse();

  const double top = std::max(std::abs(eigvals_(0)), std::abs(eigvals_(n - 1)));
  if (eigvals_(n - 1) < -tol.psd_neg * std::max(1.0, top)) {
    throw Error(ErrorCode::NotPsd, "weight has a negative eigenvalue " +
                                       std::to_string(eigvals_(n - 1)));
  }
  eigvals_ = eigvals_.cwiseMax(0.0);
  normalize_signs(eigvecs_);
  rank_ = count_above(eigvals_, tol.rank_rel * eigvals_(0));

  const auto r = static_cast<Eigen::Index>(rank_);
  const Matrix vr = eigvecs_.leftCols(r);
  const Vector lam = eigvals_.head(r);
  sqrt_ = vr * lam.cwiseSqrt().asDiagonal() * vr.transpose();
  pinv_ = vr * lam.cwiseInverse().asDiagonal() * vr.transpose();
  sqrt_pinv_ = vr * lam.cwiseSqrt().cwiseInverse().asDiagonal() * vr.transpose();
  range_proj_ = vr * vr.transpose();
  effective_ = vr * lam.asDiagonal() * vr.transpose();
}

Subspace PsdOperator::range() const {
  return Subspace::from_orthonormal(eigvecs_.leftCols(static_cast<Eigen::Index>(rank_)));
}

Subspace PsdOperator::kernel() const {
  return Subspace::from_orthonormal(
      eigvecs_.rightCols(static_cast<Eigen::Index>(dim() - rank_)));
}

}  // namespace obliq
