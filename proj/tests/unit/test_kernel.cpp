#include <doctest.h>

#include <cmath>

#include "obliq/kernel.hpp"
#include "testkit.hpp"

using namespace obliq;

namespace {

Matrix mat(int rows, int cols, std::initializer_list<double> v) {
  Matrix m(rows, cols);
  auto it = v.begin();
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = *it++;
  return m;
}

Subspace span_of(const Matrix& m) { return subspace_from_span(m, Tolerance{}); }

Vector e(int n, int i) { return Vector::Unit(n, i); }

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("tolerance validation") {
  CHECK_NOTHROW(Tolerance{}.validate());
  CHECK_THROWS_AS(Tolerance({0.0, 1e-8, 1e-10}).validate(), Error);
  CHECK_THROWS_AS(Tolerance({1e-10, 1.0, 1e-10}).validate(), Error);
  CHECK_THROWS_AS(Tolerance({1e-10, 1e-8, -1.0}).validate(), Error);
}

TEST_CASE("numerical rank") {
  const Tolerance tol;
  CHECK(numerical_rank(Matrix::Identity(3, 3), tol) == 3);
  CHECK(numerical_rank(Matrix::Zero(2, 2), tol) == 0);
  const Matrix ones = mat(2, 2, {1, 1, 1, 1});
  CHECK(numerical_rank(ones, tol) == static_cast<std::size_t>(testkit::rank(ones)));
  CHECK(numerical_rank(ones, tol) == 1);
}

TEST_CASE("rank ties are included") {
  // sigma = {1, 0.25} with cutoff exactly 0.25
  const Matrix m = mat(2, 2, {1, 0, 0, 0.25});
  CHECK(numerical_rank(m, Tolerance{0.25, 1e-8, 1e-10}) == 2);
  CHECK(numerical_rank(m, Tolerance{0.5, 1e-8, 1e-10}) == 1);
}

TEST_CASE("rank cutoff honours an external scale") {
  const Matrix tiny = mat(1, 1, {1e-12});
  CHECK(numerical_rank(tiny, Tolerance{}) == 1);
  CHECK(numerical_rank(tiny, Tolerance{}, 1.0) == 0);
}

TEST_CASE("non-finite input is rejected") {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::nan("");
  CHECK_THROWS_AS(require_finite(m, "m"), Error);
}

TEST_CASE("subspace_from_span") {
  const Subspace dup = span_of(mat(2, 2, {1, 1, 0, 0}));
  CHECK(dup.dim() == 1);
  CHECK(contains(dup, span_of(e(2, 0)), Tolerance{}));

  const Subspace empty = subspace_from_span(Matrix(3, 0), Tolerance{});
  CHECK(empty.is_zero());
  CHECK(empty.ambient_dim() == 3);

  const Matrix diag = mat(2, 2, {1, 1, 1, -1});
  CHECK(testkit::rank(diag) == 2);
  CHECK(span_of(diag).is_full());
}

TEST_CASE("canonical basis is orthonormal and sign-normalised") {
  testkit::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 6);
    const int k = rng.integer(0, n);
    const Subspace s = span_of(rng.span(n, k));
    CHECK(s.dim() == static_cast<std::size_t>(k));
    const Matrix gram = s.basis().transpose() * s.basis();
    CHECK((gram - Matrix::Identity(k, k)).norm() < 1e-12);
    for (int c = 0; c < k; ++c) {
      Eigen::Index idx;
      s.basis().col(c).cwiseAbs().maxCoeff(&idx);
      CHECK(s.basis()(idx, c) > 0.0);
    }
  }
}

TEST_CASE("complement") {
  const Tolerance tol;
  CHECK(equal(complement(span_of(e(2, 0))), span_of(e(2, 1)), tol));
  CHECK(complement(Subspace::full(3)).is_zero());
  const Subspace diag = span_of(Vector(Vector::Ones(2) / std::sqrt(2.0)));
  const Subspace perp = complement(diag);
  CHECK(perp.dim() == 1);
  CHECK(std::abs(perp.basis().col(0).dot(diag.basis().col(0))) < 1e-12);
  CHECK(equal(perp, span_of(mat(2, 1, {1, -1})), tol));
}

TEST_CASE("intersect") {
  const Tolerance tol;
  const Subspace s = span_of(mat(3, 2, {1, 0, 2, 1, 0, 1}));
  CHECK(equal(intersect(s, s, tol), s, tol));
  CHECK(intersect(span_of(e(2, 0)), span_of(e(2, 1)), tol).is_zero());

  const Subspace e12 = span_of(mat(3, 2, {1, 0, 0, 1, 0, 0}));
  const Subspace e23 = span_of(mat(3, 2, {0, 0, 1, 0, 0, 1}));
  const Subspace both = intersect(e12, e23, tol);
  const Matrix ref = testkit::intersection_basis(e12.basis(), e23.basis(), 3);
  CHECK(both.dim() == 1);
  CHECK(testkit::span_distance(both.basis(), ref) < 1e-10);
  CHECK(equal(both, span_of(e(3, 1)), tol));
}

TEST_CASE("sum") {
  const Tolerance tol;
  const Subspace s = span_of(mat(3, 1, {1, 2, 3}));
  CHECK(equal(sum(s, Subspace(3), tol), s, tol));
  CHECK(sum(span_of(e(2, 0)), span_of(e(2, 1)), tol).is_full());
  CHECK(testkit::rank(mat(2, 2, {1, 1, 1, -1})) == 2);
  CHECK(sum(span_of(mat(2, 1, {1, 1})), span_of(mat(2, 1, {1, -1})), tol).is_full());
}

TEST_CASE("subtract") {
  const Tolerance tol;
  const Subspace s = span_of(mat(3, 2, {1, 0, 0, 1, 0, 0}));
  CHECK(equal(subtract(s, Subspace(3), tol), s, tol));
  CHECK(subtract(s, s, tol).is_zero());
  CHECK(equal(subtract(s, span_of(e(3, 0)), tol), span_of(e(3, 1)), tol));
  CHECK_THROWS_AS(subtract(s, span_of(e(3, 2)), tol), Error);
  try {
    subtract(s, span_of(e(3, 2)), tol);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotContained);
  }
}

TEST_CASE("preimage") {
  const Tolerance tol;
  const Subspace s = span_of(mat(3, 1, {1, 1, 0}));
  CHECK(equal(preimage(Matrix::Identity(3, 3), s, tol), s, tol));
  CHECK(preimage(Matrix::Zero(3, 3), s, tol).is_full());
  // W e2 = 0 lies in S, W e1 = e1 does not
  const Subspace pre = preimage(mat(2, 2, {1, 0, 0, 0}), span_of(e(2, 1)), tol);
  CHECK(equal(pre, span_of(e(2, 1)), tol));
}

TEST_CASE("ortho_projector") {
  CHECK(ortho_projector(span_of(e(2, 0))).matrix().isApprox(mat(2, 2, {1, 0, 0, 0})));
  CHECK(ortho_projector(Subspace::full(3)).matrix().isApprox(Matrix::Identity(3, 3)));
  const Vector v = Vector::Ones(2) / std::sqrt(2.0);
  const Matrix p = ortho_projector(span_of(v)).matrix();
  CHECK((p - v * v.transpose()).norm() < 1e-14);
  CHECK((p - mat(2, 2, {.5, .5, .5, .5})).norm() < 1e-14);
}

TEST_CASE("moore_penrose") {
  const Tolerance tol;
  CHECK(moore_penrose(Matrix::Identity(3, 3), tol).isApprox(Matrix::Identity(3, 3)));
  CHECK((moore_penrose(mat(2, 2, {2, 0, 0, 0}), tol) - mat(2, 2, {.5, 0, 0, 0})).norm() <
        1e-15);
  const Matrix w = mat(2, 2, {1, 1, 1, 1});
  const Matrix p = moore_penrose(w, tol);
  CHECK((p - mat(2, 2, {.25, .25, .25, .25})).norm() < 1e-14);
  CHECK((w * p * w - w).norm() < 1e-14);
  CHECK((p * w * p - p).norm() < 1e-14);
  CHECK(((w * p).transpose() - w * p).norm() < 1e-14);
  CHECK(((p * w).transpose() - p * w).norm() < 1e-14);
}

TEST_CASE("friedrichs angle") {
  const Tolerance tol;
  CHECK(friedrichs_angle(span_of(e(2, 0)), span_of(e(2, 1)), tol) == doctest::Approx(0.0));
  const Subspace s = span_of(mat(3, 2, {1, 0, 1, 1, 0, 2}));
  CHECK(friedrichs_angle(s, s, tol) == doctest::Approx(0.0));
  const double c = friedrichs_angle(span_of(e(2, 0)), span_of(mat(2, 1, {1, 1})), tol);
  // both spans are lines: the cosine is |<e1, (1,1)/sqrt 2>|
  CHECK(c == doctest::Approx(std::abs(e(2, 0).dot(Vector::Ones(2))) / std::sqrt(2.0)));
  CHECK(c == doctest::Approx(1.0 / std::sqrt(2.0)));
  // shared direction e3 is removed before measuring the angle
  const Subspace a = span_of(mat(3, 2, {1, 0, 0, 0, 0, 1}));
  const Subspace b = span_of(mat(3, 2, {1, 0, 1, 0, 0, 1}));
  CHECK(friedrichs_angle(a, b, tol) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("oblique projection validation") {
  const Tolerance tol;
  const Matrix q = mat(2, 2, {1, 1, 0, 0});
  const ObliqueProjection p = ObliqueProjection::from_matrix(q, tol);
  CHECK(equal(p.range(), span_of(e(2, 0)), tol));
  CHECK(equal(p.nullspace(), span_of(mat(2, 1, {1, -1})), tol));
  CHECK_THROWS_AS(ObliqueProjection::from_matrix(mat(2, 2, {2, 0, 0, 0}), tol), Error);
  CHECK_THROWS_AS(ObliqueProjection(q, span_of(e(2, 0)), span_of(e(2, 0))), Error);
}

TEST_CASE("psd operator") {
  const Tolerance tol;
  const PsdOperator a(mat(2, 2, {1, 1, 1, 1}), tol);
  CHECK(a.rank() == 1);
  CHECK(a.norm() == doctest::Approx(2.0));
  CHECK((a.sqrt() * a.sqrt() - a.base()).norm() < 1e-12);
  CHECK((a.base() * a.pinv() * a.base() - a.base()).norm() < 1e-12);
  CHECK(equal(a.range(), span_of(mat(2, 1, {1, 1})), tol));
  CHECK(equal(a.kernel(), span_of(mat(2, 1, {1, -1})), tol));
  CHECK(equal(a.range(), canonical_span(a.sqrt(), tol, 1.0), tol));

  CHECK_THROWS_AS(PsdOperator(mat(2, 2, {1, 0, 0, -1})), Error);
  CHECK_THROWS_AS(PsdOperator(mat(2, 2, {1, 1, 0, 1})), Error);
  CHECK_THROWS_AS(PsdOperator(Matrix::Zero(2, 3)), Error);
  try {
    PsdOperator bad(mat(2, 2, {1, 0, 0, -1}));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotPsd);
  }
  // tiny negative noise clips to zero
  const PsdOperator noisy(mat(2, 2, {1, 0, 0, -1e-14}));
  CHECK(noisy.rank() == 1);
  CHECK(noisy.eigvals()(1) == 0.0);
}

TEST_CASE("psd operator invariants on random weights") {
  testkit::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(1, 7);
    const int r = rng.integer(0, n);
    const PsdOperator a(rng.psd(n, r));
    CHECK(a.rank() == static_cast<std::size_t>(r));
    const double s = std::max(1.0, a.norm());
    CHECK((a.sqrt() * a.sqrt() - a.base()).norm() < 1e-8 * s);
    CHECK((a.base() * a.pinv() * a.base() - a.base()).norm() < 1e-8 * s);
    CHECK((a.range_proj() - testkit::projector(testkit::range_basis(a.base(), 1e-10, s)))
              .norm() < 1e-8);
    for (int i = 1; i < n; ++i) CHECK(a.eigvals()(i - 1) >= a.eigvals()(i));
  }
}

TEST_CASE("subspace algebra properties") {
  const Tolerance tol;
  testkit::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(1, 7);
    const Subspace s1 = span_of(rng.span(n, rng.integer(0, n)));
    const Subspace s2 = span_of(rng.span(n, rng.integer(0, n)));

    const Matrix p = ortho_projector(s1).matrix();
    CHECK((p * p - p).norm() < 1e-8);
    CHECK((p - p.transpose()).norm() < 1e-8);
    CHECK(std::abs(p.trace() - static_cast<double>(s1.dim())) < 1e-8);

    CHECK(equal(complement(sum(s1, s2, tol)),
                intersect(complement(s1), complement(s2), tol), tol));

    const int r = rng.integer(0, n);
    const Matrix w = rng.gaussian(n, r) * rng.gaussian(r, n);
    const Subspace pre = preimage(w, s1, tol);
    CHECK(contains(pre, nullspace(w, tol), tol));
    const Matrix comp = complement(s1).projector() * w;
    CHECK(pre.dim() == static_cast<std::size_t>(n - testkit::rank(comp, 1e-10,
                                                                  testkit::spectral(w))));

    const Matrix pw = moore_penrose(w, tol);
    const double sw = std::max(1.0, testkit::spectral(w));
    const double sp = std::max(1.0, testkit::spectral(pw));
    CHECK((w * pw * w - w).norm() <= 10 * tol.eq_abs * sw * sw * sp);
    CHECK((pw * w * pw - pw).norm() <= 10 * tol.eq_abs * sp * sp * sw);
    CHECK(((w * pw).transpose() - w * pw).norm() <= 10 * tol.eq_abs * sw * sp);
    CHECK(((pw * w).transpose() - pw * w).norm() <= 10 * tol.eq_abs * sw * sp);
    CHECK((pw - testkit::pinv(w, 1e-10)).norm() <= 1e-6 * sp);
  }
}

}  // TEST_SUITE
