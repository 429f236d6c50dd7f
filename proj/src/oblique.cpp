#include "obliq/oblique.hpp"

#include <algorithm>

#include "obliq/douglas.hpp"

namespace obliq {

namespace {

void require_dims(const PsdOperator& a, const Subspace& s) {
  if (a.dim() != s.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "weight and subspace dimensions differ");
  }
}

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

}  // namespace

BlockDecomposition block_decompose(const PsdOperator& a, const Subspace& s) {
  require_dims(a, s);
  Subspace perp = complement(s);
  const Matrix& w = a.effective();
  const Matrix& bs = s.basis();
  const Matrix& bp = perp.basis();
  BlockDecomposition out{bs.transpose() * w * bs, bs.transpose() * w * bp,
                         bp.transpose() * w * bp, s, std::move(perp)};
  out.a = 0.5 * (out.a + out.a.transpose());
  out.c = 0.5 * (out.c + out.c.transpose());
  return out;
}

Matrix reassemble(const BlockDecomposition& blocks) {
  const Matrix& bs = blocks.s.basis();
  const Matrix& bp = blocks.s_perp.basis();
  return bs * blocks.a * bs.transpose() + bs * blocks.b * bp.transpose() +
         bp * blocks.b.transpose() * bs.transpose() + bp * blocks.c * bp.transpose();
}

ObliqueProjection frame_projection(const Subspace& s, const Matrix& x,
                                   const Tolerance& tol) {
  const std::size_t n = s.ambient_dim();
  const std::size_t k = s.dim();
  if (x.rows() != idx(k) || x.cols() != idx(n - k)) {
    throw Error(ErrorCode::DimensionMismatch, "frame block must be dim S x dim S-perp");
  }
  require_finite(x, "frame block");
  if (k == 0) {
    return ObliqueProjection(Matrix::Zero(idx(n), idx(n)), s, Subspace::full(n));
  }
  const Subspace perp = complement(s);
  const Matrix& bs = s.basis();
  const Matrix& bp = perp.basis();
  Matrix m = bs * (bs.transpose() + x * bp.transpose());
  // Row space of m is spanned by B_S + B_perp x^T; its singular values are
  // all >= 1, so the unit scale fixes the rank at k.
  Subspace null = complement(canonical_span(bs + bp * x.transpose(), tol, 1.0));
  return ObliqueProjection(std::move(m), s, std::move(null));
}

Subspace degenerate_part(const PsdOperator& a, const Subspace& s,
                         const Tolerance& tol) {
  require_dims(a, s);
  if (s.is_zero()) return Subspace(s.ambient_dim());
  const Matrix block = s.basis().transpose() * a.effective() * s.basis();
  const Subspace coords = nullspace(block, tol, a.norm());
  if (coords.is_zero()) return Subspace(s.ambient_dim());
  return canonical_span(s.basis() * coords.basis(), tol, 1.0);
}

bool is_compatible(const PsdOperator& a, const Subspace& s, const Tolerance& tol) {
  require_dims(a, s);
  if (s.is_zero() || s.is_full()) return true;
  const BlockDecomposition blocks = block_decompose(a, s);
  return range_inclusion(blocks.b, blocks.a, tol, a.norm());
}

bool direct_sum_check(const PsdOperator& a, const Subspace& s, const Tolerance& tol) {
  require_dims(a, s);
  const Subspace pre = preimage(a.effective(), complement(s), tol);
  return sum(s, pre, tol).dim() == s.ambient_dim();
}

ObliqueProjection pas(const PsdOperator& a, const Subspace& s, const Tolerance& tol) {
  require_dims(a, s);
  tol.validate();
  const std::size_t n = s.ambient_dim();
  const std::size_t k = s.dim();
  if (k == 0 || k == n) {
    return frame_projection(s, Matrix::Zero(idx(k), idx(n - k)), tol);
  }
  const BlockDecomposition blocks = block_decompose(a, s);
  if (!range_inclusion(blocks.b, blocks.a, tol, a.norm())) {
    throw Error(ErrorCode::Incompatible, "a X = b has no solution: pair is incompatible");
  }
  const ReducedSolution d = reduced_solution(blocks.a, blocks.b, tol, a.norm());
  return frame_projection(s, d.d, tol);
}

ObliqueProjection pas_invertible(const PsdOperator& a, const Subspace& s,
                                 const Tolerance& tol) {
  require_dims(a, s);
  if (!a.full_rank()) {
    throw Error(ErrorCode::Singular, "closed-form projection needs an invertible weight");
  }
  const auto n = idx(a.dim());
  const Matrix p = s.projector();
  const Matrix q = Matrix::Identity(n, n) - p;
  const Matrix& w = a.base();
  const Matrix split = p * w * p + q * w * q;
  Matrix m = p * split.ldlt().solve(w);
  return ObliqueProjection::from_matrix(std::move(m), tol);
}

ObliqueProjection pas_closed_range(const PsdOperator& a, const Subspace& s,
                                   const Tolerance& tol) {
  require_dims(a, s);
  const Matrix p = s.projector();
  const Matrix& w = a.effective();
  const Matrix pap = p * w * p;
  Matrix m = moore_penrose(pap, tol, a.norm()) * p * w;
  m += degenerate_part(a, s, tol).projector();
  return ObliqueProjection::from_matrix(std::move(m), tol);
}

ReducedForms reduced_forms(const PsdOperator& a, const Subspace& s,
                           const Tolerance& tol) {
  require_dims(a, s);
  const auto n = idx(a.dim());
  if (s.is_zero()) return {Matrix::Zero(n, n), Matrix::Zero(n, n)};
  const Matrix p = s.projector();
  const Matrix& w = a.effective();
  ReducedForms out;
  out.from_compression = reduced_solution(p * w * p, p * w, tol, a.norm()).d;
  const Matrix& root = a.sqrt();
  const Subspace m = image(root, s, tol);
  const double root_norm = std::sqrt(a.norm());
  out.from_sqrt = reduced_solution(root * p, m.projector() * root, tol, root_norm).d;
  return out;
}

KreinVerdict krein_details(const ObliqueProjection& q, const PsdOperator& a,
                           const Subspace& s, const Tolerance& tol) {
  require_dims(a, s);
  if (q.dim() != s.ambient_dim() || !equal(q.range(), s, tol)) {
    throw Error(ErrorCode::RangeMismatch, "projection range differs from S");
  }
  const Matrix& w = a.base();
  const double scale = 1.0 + a.norm();
  KreinVerdict v;
  v.hermitian_error = (w * q.matrix() - q.matrix().transpose() * w).norm();
  v.algebraic = v.hermitian_error <=
                tol.eq_abs * scale * std::max(1.0, spectral_norm(q.matrix()));
  if (q.nullspace().is_zero() || s.is_zero()) {
    v.containment_error = 0.0;
  } else {
    v.containment_error = (s.basis().transpose() * w * q.nullspace().basis()).norm();
  }
  v.containment = v.containment_error <= tol.eq_abs * scale;
  return v;
}

bool krein_check(const ObliqueProjection& q, const PsdOperator& a,
                 const Subspace& s, const Tolerance& tol) {
  const KreinVerdict v = krein_details(q, a, s, tol);
  if (v.algebraic != v.containment) {
    throw Error(ErrorCode::IdentityViolation,
                "A-Hermitian test and nullspace containment disagree");
  }
  return v.algebraic;
}

ObliqueProjection family_member(const PsdOperator& a, const Subspace& s,
                                const Matrix& t, const Tolerance& tol) {
  require_dims(a, s);
  const Subspace nn = degenerate_part(a, s, tol);
  const std::size_t n = s.ambient_dim();
  const std::size_t k = s.dim();
  if (t.rows() != idx(nn.dim()) || t.cols() != idx(n - k)) {
    throw Error(ErrorCode::DimensionMismatch, "T must be dim N x dim S-perp");
  }
  require_finite(t, "T");
  const ObliqueProjection base = pas(a, s, tol);
  if (nn.is_zero() || k == n) return base;
  // In the S frame, B_N = B_S C, so the member is [[I, d + C T], [0, 0]].
  const Subspace perp = complement(s);
  const Matrix d = s.basis().transpose() * base.matrix() * perp.basis();
  const Matrix c = s.basis().transpose() * nn.basis();
  return frame_projection(s, d + c * t, tol);
}

bool ChainFlags::implications_hold() const {
  auto implies = [](bool p, bool q) { return !p || q; };
  return implies(compatible, image_closed_in_range) &&
         implies(image_closed_in_range, sqrt_image_closed_in_range) &&
         implies(sqrt_image_closed_in_range, sum_with_kernel_closed) &&
         image_closed_in_range == preimage_of_image &&
         sum_with_kernel_closed == range_projection_closed;
}

CompatibilityReport diagnostics_chain(const PsdOperator& a, const Subspace& s,
                                      const Tolerance& tol) {
  require_dims(a, s);
  tol.validate();
  const std::size_t n = s.ambient_dim();
  const std::size_t k = s.dim();
  const Matrix& w = a.effective();
  const Subspace kernel = a.kernel();
  const Subspace range = a.range();

  const bool compatible = is_compatible(a, s, tol);
  Subspace pre_perp = preimage(w, complement(s), tol);
  const bool sum_ok = sum(s, pre_perp, tol).dim() == n;

  Matrix d = Matrix::Zero(idx(k), idx(n - k));
  std::optional<ObliqueProjection> projection;
  if (compatible) {
    projection = pas(a, s, tol);
    if (k > 0 && k < n) {
      const BlockDecomposition blocks = block_decompose(a, s);
      d = reduced_solution(blocks.a, blocks.b, tol, a.norm()).d;
    }
  }

  // Coordinates of P_{R(A)}(S) in the retained eigenbasis. Every flag below
  // reads its rank from one of these products, so the rank decisions are
  // ordered: rank(C^T L C) <= rank(L C) <= rank(L^{1/2} C) <= rank(C).
  const Eigen::Index r = idx(a.rank());
  const Matrix coords = a.eigvecs().leftCols(r).transpose() * s.basis();
  const Vector lambda = a.eigvals().head(r);
  const Matrix root_coords = lambda.cwiseSqrt().asDiagonal() * coords;
  const std::size_t rank_proj = numerical_rank(coords, tol, 1.0);
  const std::size_t rank_root = numerical_rank(root_coords, tol, std::sqrt(a.norm()));
  const std::size_t rank_image =
      numerical_rank(lambda.cwiseSqrt().asDiagonal() * root_coords, tol, a.norm());
  const std::size_t rank_block =
      numerical_rank(root_coords.transpose() * root_coords, tol, a.norm());
  const std::size_t kappa = n - a.rank();

  ChainFlags chain;
  // the Douglas test only counts when the a-block kernel is S cap N(A)
  chain.compatible = compatible && rank_block == rank_proj;
  chain.image_closed_in_range = rank_image == rank_proj;
  // dim A^{-1}(A(S)) = dim N(A) + dim A(S), dim(S + N(A)) = dim N(A) + dim P(S)
  chain.preimage_of_image = kappa + rank_image == kappa + rank_proj;
  chain.sqrt_image_closed_in_range = rank_root == rank_proj;
  // S cap N(A) is the null space of the same coordinate map
  const std::size_t meet = k - rank_proj;
  const std::size_t sum_dim = kappa + rank_proj;
  chain.sum_with_kernel_closed = sum_dim + meet == k + kappa;
  chain.range_projection_closed = rank_proj + kappa == sum_dim;
  const Subspace projected = image(a.range_proj(), s, tol);

  // W = P_{R(A)}(S) shifted by fixed kernel vectors has the same projection.
  const bool projected_ok = is_compatible(a, projected, tol);
  bool shifted_ok = projected_ok;
  if (!projected.is_zero() && !kernel.is_zero()) {
    Matrix shifted = projected.basis();
    for (Eigen::Index j = 0; j < shifted.cols(); ++j) {
      shifted.col(j) += kernel.basis().rowwise().sum() / static_cast<double>(j + 1);
    }
    shifted_ok = is_compatible(a, canonical_span(shifted, tol, 1.0), tol);
  }

  return CompatibilityReport{compatible,
                             sum_ok,
                             degenerate_part(a, s, tol),
                             std::move(pre_perp),
                             std::move(d),
                             std::move(projection),
                             chain,
                             projected_ok,
                             shifted_ok};
}

}  // namespace obliq
