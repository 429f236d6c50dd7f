#include <doctest.h>

#include <cmath>
#include <functional>
#include <memory>

#include "obliq/oblique.hpp"
#include "obliq/oprange.hpp"
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

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Subspace span_of(const Matrix& m) { return subspace_from_span(m, Tolerance{}); }
Subspace e(int n, int i) { return span_of(Matrix(Vector::Unit(n, i))); }
WeightPtr weight(const Matrix& m) { return std::make_shared<const PsdOperator>(m); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("oprange") {

TEST_CASE("lift") {
  const Tolerance tol;
  const Vector u = vec({1, -2, 3});
  CHECK(lift(weight(Matrix::Identity(3, 3)), u, tol).witness.isApprox(u));
  const WeightPtr d40 = weight(mat(2, 2, {4, 0, 0, 0}));
  CHECK((lift(d40, vec({2, 0}), tol).witness - vec({1, 0})).norm() < 1e-15);
  CHECK(code_of([&] { lift(d40, vec({0, 1}), tol); }) == ErrorCode::NotInRange);
  const Membership m = membership(*d40, vec({0, 1}), tol);
  CHECK_FALSE(m.in_range);
  CHECK_FALSE(m.in_sqrt_range);
}

TEST_CASE("range inner product") {
  const Tolerance tol;
  const WeightPtr id = weight(Matrix::Identity(2, 2));
  const Vector x = vec({1, 2}), y = vec({3, -1});
  CHECK(range_inner(lift(id, x, tol), lift(id, y, tol)) == doctest::Approx(x.dot(y)));
  const WeightPtr d40 = weight(mat(2, 2, {4, 0, 0, 0}));
  const RangeVector u = lift(d40, vec({2, 0}), tol);
  CHECK(range_inner(u, u) == doctest::Approx(1.0));
  CHECK(range_norm(u) == doctest::Approx(1.0));
  const WeightPtr other = weight(mat(2, 2, {4, 0, 0, 1}));
  CHECK(code_of([&] { range_inner(u, lift(other, vec({2, 0}), tol)); }) ==
        ErrorCode::WeightMismatch);
}

TEST_CASE("isometry, coisometry and norm structure on random weights") {
  const Tolerance tol;
  testkit::Rng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(1, 7);
    const WeightPtr a = weight(rng.psd(n, rng.integer(0, n)));
    const Vector x = rng.gaussian(n), y = rng.gaussian(n);
    const RangeVector ax = lift(a, a->base() * x, tol);
    const RangeVector ay = lift(a, a->base() * y, tol);
    CHECK(std::abs(range_inner(ax, ay) - (a->base() * x).dot(y)) <= 1e-8);

    const Vector cx = chart(*a, a->sqrt() * x);
    CHECK(std::abs(cx.norm() - (a->range_proj() * x).norm()) <= 1e-8);
    CHECK(std::abs(range_norm(ax) - std::sqrt(std::max(0.0, x.dot(a->base() * x)))) <= 1e-8);

    // minimal-norm preimage
    const RangeVector u = lift(a, a->sqrt() * x, tol);
    const Matrix ker = Matrix::Identity(n, n) - a->range_proj();
    for (int k = 0; k < 20; ++k) {
      const Vector pre = u.witness + ker * rng.gaussian(n);
      CHECK((a->sqrt() * pre - u.ambient).norm() <= 1e-8 * (1.0 + u.ambient.norm()));
      CHECK(range_norm(u) <= pre.norm() + tol.eq_abs);
    }

    // ||u||_T <= ||u||' <= (||A^{1/2}||^2 + 1)^{1/2} ||u||_T with ||u||'^2 = ||u||^2 + ||u||_T^2
    const double t_norm = range_norm(u);
    const double prime = std::sqrt(u.ambient.squaredNorm() + t_norm * t_norm);
    const double root = testkit::spectral(a->sqrt());
    CHECK(t_norm <= prime + 1e-12);
    CHECK(prime <= std::sqrt(root * root + 1.0) * t_norm + 1e-9);
  }
}

TEST_CASE("qas examples") {
  const Tolerance tol;
  const Subspace s = span_of(mat(3, 1, {1, 0, 1}));
  CHECK((qas(PsdOperator(Matrix::Identity(3, 3)), s, tol).coord_matrix - s.projector()).norm() <
        1e-14);
  CHECK(qas(PsdOperator(mat(2, 2, {0, 0, 0, 1})), e(2, 0), tol).coord_matrix.norm() < 1e-14);

  const PsdOperator ones(mat(2, 2, {1, 1, 1, 1}));
  const RangeSpaceProjection q = qas(ones, e(2, 0), tol);
  // the chart is span((1,1)); A(S) = R(A), so Q is the identity there
  const Matrix chart_proj = testkit::projector(testkit::range_basis(ones.base()));
  CHECK((q.coord_matrix - chart_proj).norm() < 1e-12);
  CHECK(q.range_image.dim() == 1);
}

TEST_CASE("qas applied to lifted vectors lands in A(S)") {
  const Tolerance tol;
  testkit::Rng rng(304);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(2, 6);
    const WeightPtr a = weight(rng.psd(n, rng.integer(1, n)));
    const Subspace s = span_of(rng.span(n, rng.integer(0, n)));
    const RangeSpaceProjection q = qas(a, s, tol);
    const Matrix c = q.coord_matrix;
    CHECK((c - c.transpose()).norm() <= 1e-8);
    CHECK((c * c - c).norm() <= 1e-8);
    CHECK(contains(q.range_image, image(c, Subspace::full(n), tol), tol));
    CHECK((c * q.null_image.basis()).norm() <= 1e-8);

    const RangeVector v = lift(a, a->sqrt() * rng.gaussian(n), tol);
    const RangeVector w = apply(q, v);
    const Subspace as = image(a->base(), s, tol);
    CHECK(contains(as, span_of(Matrix(w.ambient)), tol));
  }
}

TEST_CASE("theta") {
  const Tolerance tol;
  const PsdOperator a3(mat(3, 3, {2, 1, 0, 1, 2, 0, 0, 0, 0}));
  CHECK((theta(a3, Matrix::Identity(3, 3), tol).chart - a3.range_proj()).norm() < 1e-12);

  const PsdOperator d10(mat(2, 2, {1, 0, 0, 0}));
  const ThetaResult down = theta(d10, mat(2, 2, {0, 0, 1, 0}), tol);
  CHECK(down.chart.norm() < 1e-15);
  CHECK(down.kernel_invariant);
  CHECK(down.bounded);
  CHECK(code_of([&] { theta(d10, mat(2, 2, {0, 1, 0, 0}), tol); }) == ErrorCode::NotExtendable);
}

TEST_CASE("theta contract and multiplicativity") {
  const Tolerance tol;
  testkit::Rng rng(305);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(2, 6);
    const int r = rng.integer(1, n);
    const PsdOperator a(rng.psd(n, r));
    // operators leaving N(A) invariant: no R(A) component on N(A) columns
    const auto extendable = [&] {
      Matrix blocks = rng.gaussian(n, n);
      blocks.topRightCorner(r, n - r).setZero();
      return Matrix(a.eigvecs() * blocks * a.eigvecs().transpose());
    };
    const Matrix b1 = extendable(), b2 = extendable();
    const Matrix c1 = theta(a, b1, tol).chart;
    const Matrix c2 = theta(a, b2, tol).chart;
    const double scale = 1.0 + c1.norm() * c2.norm();
    CHECK((theta(a, b1 * b2, tol).chart - c1 * c2).norm() <= 10 * tol.eq_abs * scale);
    const Vector x = rng.gaussian(n);
    CHECK((c1 * chart(a, a.base() * x) - chart(a, a.base() * b1 * x)).norm() <=
          1e-8 * (1.0 + (a.base() * b1 * x).norm()));
  }
}

TEST_CASE("theta of the oblique projection is Q") {
  const Tolerance tol;
  CHECK(theta_pas_identity(PsdOperator(Matrix::Identity(2, 2)), e(2, 0), tol));
  CHECK(theta_pas_identity(PsdOperator(mat(2, 2, {1, 1, 1, 1})), e(2, 0), tol));
  CHECK(theta_pas_identity(PsdOperator(mat(2, 2, {0, 0, 0, 1})), e(2, 0), tol));
}

TEST_CASE("qas range image") {
  const Tolerance tol;
  const Subspace s = span_of(mat(3, 2, {1, 0, 0, 1, 1, 1}));
  const RangeImage id = qas_range_image(PsdOperator(Matrix::Identity(3, 3)), s, tol);
  CHECK(equal(id.image, s, tol));
  CHECK(id.equals_image_of_s);
  const RangeImage z = qas_range_image(PsdOperator(mat(2, 2, {0, 0, 0, 1})), e(2, 0), tol);
  CHECK(z.image.is_zero());
  CHECK(z.equals_image_of_s);

  testkit::Rng rng(306);
  for (int trial = 0; trial < 20; ++trial) {
    const PsdOperator a(rng.psd(4, 2));
    const Subspace s2 = span_of(rng.span(4, 2));
    const RangeImage img = qas_range_image(a, s2, tol);
    CHECK(img.equals_image_of_s);
    CHECK(testkit::span_distance(img.image.basis(),
                                 testkit::range_basis(a.base() * s2.basis(), 1e-10, a.norm())) <
          1e-8);
  }
}

TEST_CASE("sharp projection") {
  const Tolerance tol;
  const Subspace s = span_of(mat(2, 1, {1, 2}));
  CHECK((sharp_projection(PsdOperator(Matrix::Identity(2, 2)), s, tol) - s.projector()).norm() <
        1e-14);
  CHECK(sharp_projection(PsdOperator(mat(2, 2, {0, 0, 0, 1})), e(2, 0), tol).norm() < 1e-14);
  const PsdOperator ones(mat(2, 2, {1, 1, 1, 1}));
  const Matrix sharp = sharp_projection(ones, e(2, 0), tol);
  const Matrix expect = ones.range_proj() * mat(2, 2, {1, 1, 0, 0});
  CHECK((sharp - expect).norm() < 1e-14);
  CHECK((sharp * sharp - sharp).norm() < 1e-14);
}

TEST_CASE("dense sum and compatibility forms") {
  const Tolerance tol;
  CHECK(dense_sum_check(PsdOperator(Matrix::Identity(2, 2)), e(2, 0), tol));
  CHECK(dense_sum_check(PsdOperator(mat(2, 2, {0, 0, 0, 1})), e(2, 0), tol));
  const CompatibilityForms id = compatibility_forms(PsdOperator(Matrix::Identity(2, 2)), e(2, 0), tol);
  CHECK(id.compatible);
  CHECK(id.all_equal());
  const CompatibilityForms d = compatibility_forms(PsdOperator(mat(2, 2, {0, 0, 0, 1})), e(2, 0), tol);
  CHECK(d.compatible);
  CHECK(d.all_equal());

  testkit::Rng rng(307);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(1, 6);
    const PsdOperator a(rng.psd(n, rng.integer(0, n)));
    const Subspace s = span_of(rng.span(n, rng.integer(0, n)));
    CHECK(dense_sum_check(a, s, tol));
    const CompatibilityForms f = compatibility_forms(a, s, tol);
    CHECK(f.all_equal());
    CHECK(f.compatible);
  }
}

TEST_CASE("theta is constant on the family") {
  const Tolerance tol;
  testkit::Rng rng(308);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(2, 6);
    const int r = rng.integer(0, n - 1);
    const int k = rng.integer(r + 1, n);  // forces S cap N(A) nonzero
    const PsdOperator a(rng.psd(n, r));
    const Subspace s = span_of(rng.span(n, k));
    const Subspace nn = degenerate_part(a, s, tol);
    REQUIRE(nn.dim() == static_cast<std::size_t>(k - r));
    const Matrix base = theta(a, pas(a, s, tol).matrix(), tol).chart;
    for (int j = 0; j < 5; ++j) {
      const Matrix t = rng.gaussian(static_cast<Eigen::Index>(nn.dim()), n - k);
      CHECK((theta(a, family_member(a, s, t, tol).matrix(), tol).chart - base).norm() <= 1e-7);
    }
  }
}

}  // TEST_SUITE
