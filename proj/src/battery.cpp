#include "obliq/battery.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "obliq/douglas.hpp"
#include "obliq/interpolant.hpp"
#include "obliq/oblique.hpp"
#include "obliq/oprange.hpp"

namespace obliq {

namespace {

constexpr int kProbes = 20;

class Probe {
 public:
  explicit Probe(std::uint64_t seed) : rng_(seed) {}

  Matrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal_(rng_);
    return m;
  }
  Vector gaussian(Eigen::Index n) { return gaussian(n, 1).col(0); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

Check measured(std::string name, double value, double bound) {
  return Check{std::move(name), value <= bound, false, value, bound};
}
Check flag(std::string name, bool ok) { return Check{std::move(name), ok, false, 0.0, 0.0}; }
Check skipped(std::string name) { return Check{std::move(name), true, true, 0.0, 0.0}; }

}  // namespace

std::vector<Check> run_battery(const PsdOperator& a, const Subspace& s,
                               const Tolerance& tol, std::uint64_t seed) {
  tol.validate();
  Probe probe(seed);
  std::vector<Check> out;
  const auto n = static_cast<Eigen::Index>(a.dim());
  const auto k = static_cast<Eigen::Index>(s.dim());
  const Matrix& w = a.base();
  const double a_scale = 1.0 + a.norm();
  const Subspace perp = complement(s);

  const bool compatible = is_compatible(a, s, tol);
  out.push_back(flag("compatibility_matches_direct_sum",
                     compatible == direct_sum_check(a, s, tol)));
  if (!compatible) {
    out.push_back(flag("pair_compatible", false));
    return out;
  }

  // Projection laws.
  const ObliqueProjection p = pas(a, s, tol);
  const Matrix& pm = p.matrix();
  const double p_norm = spectral_norm(pm);
  const Subspace nn = degenerate_part(a, s, tol);
  out.push_back(measured("projection_idempotent", (pm * pm - pm).norm(), tol.eq_abs));
  out.push_back(measured("projection_a_hermitian", (w * pm - pm.transpose() * w).norm(),
                         tol.eq_abs * a_scale));
  out.push_back(flag("projection_range_is_s",
                     equal(ObliqueProjection::from_matrix(pm, tol).range(), s, tol)));
  const Subspace expected_null =
      subtract(preimage(a.effective(), perp, tol), nn, tol);
  out.push_back(flag("projection_nullspace", equal(p.nullspace(), expected_null, tol)));

  // Independent constructions.
  out.push_back(measured("closed_range_formula_agrees",
                         (pas_closed_range(a, s, tol).matrix() - pm).norm(),
                         10 * tol.eq_abs * std::max(1.0, p_norm)));
  if (a.full_rank()) {
    out.push_back(measured("invertible_formula_agrees",
                           (pas_invertible(a, s, tol).matrix() - pm).norm(),
                           10 * tol.eq_abs * std::max(1.0, p_norm)));
  } else {
    out.push_back(skipped("invertible_formula_agrees"));
  }
  {
    const ReducedForms forms = reduced_forms(a, s, tol);
    const Matrix target = pm - nn.projector();
    const double err = std::max((forms.from_compression - target).norm(),
                                (forms.from_sqrt - target).norm());
    out.push_back(measured("reduced_forms_agree", err, 10 * tol.eq_abs * std::max(1.0, p_norm)));
  }
  if (k > 0 && k < n) {
    const BlockDecomposition blocks = block_decompose(a, s);
    out.push_back(measured("block_reassembly", (reassemble(blocks) - a.effective()).norm(),
                           tol.eq_abs * a_scale));
    const ReducedSolution d = reduced_solution(blocks.a, blocks.b, tol, a.norm());
    if (d.norm_sq > 0.0 && numerical_rank(blocks.a, tol, a.norm()) > 0) {
      const double lambda = minimal_lambda(blocks.a, blocks.b, tol);
      out.push_back(measured("douglas_norm_equals_minimal_lambda",
                             std::abs(lambda - d.norm_sq) / d.norm_sq, 1e-6));
    } else {
      out.push_back(skipped("douglas_norm_equals_minimal_lambda"));
    }
  } else {
    out.push_back(skipped("block_reassembly"));
    out.push_back(skipped("douglas_norm_equals_minimal_lambda"));
  }

  // Krein: sampled projections with range S, A-Hermitian and not.
  {
    int disagreements = 0;
    double worst_norm_gap = 0.0;
    for (int i = 0; i < kProbes && k > 0 && k < n; ++i) {
      const bool hermitian_sample = (i % 2 == 0) && !nn.is_zero();
      const ObliqueProjection q =
          hermitian_sample
              ? family_member(a, s, probe.gaussian(static_cast<Eigen::Index>(nn.dim()), n - k), tol)
              : frame_projection(s, probe.gaussian(k, n - k), tol);
      const KreinVerdict v = krein_details(q, a, s, tol);
      if (v.algebraic != v.containment) ++disagreements;
      if (v.algebraic) {
        worst_norm_gap = std::max(worst_norm_gap, p_norm - spectral_norm(q.matrix()));
      }
    }
    out.push_back(measured("krein_tests_agree", disagreements, 0.0));
    out.push_back(measured("pas_norm_minimal_in_family", worst_norm_gap, tol.eq_abs));
  }

  // Closedness chain.
  {
    const CompatibilityReport report = diagnostics_chain(a, s, tol);
    const auto flags = report.chain.as_array();
    out.push_back(flag("closedness_chain_all_true",
                       std::all_of(flags.begin(), flags.end(), [](bool b) { return b; })));
    out.push_back(flag("closedness_chain_implications", report.chain.implications_hold()));
    out.push_back(flag("projected_subspace_compatible",
                       report.projected_compatible && report.shifted_compatible));
  }
  if (nn.is_zero()) {
    const Subspace as_perp = complement(image(a.effective(), s, tol));
    const bool direct = s.dim() + as_perp.dim() == a.dim() &&
                        intersect(s, as_perp, tol).is_zero();
    out.push_back(flag("trivial_kernel_direct_sum", direct));
  } else {
    out.push_back(skipped("trivial_kernel_direct_sum"));
  }

  // Operator range structure.
  const auto weight = std::make_shared<const PsdOperator>(a);
  {
    double iso = 0.0;
    double coiso = 0.0;
    for (int i = 0; i < kProbes; ++i) {
      const Vector x = probe.gaussian(n);
      const Vector y = probe.gaussian(n);
      const RangeVector ax = lift(weight, w * x, tol);
      const RangeVector ay = lift(weight, w * y, tol);
      iso = std::max(iso, std::abs(range_inner(ax, ay) - (w * x).dot(y)) /
                              (1.0 + (w * x).norm() * y.norm()));
      coiso = std::max(coiso, std::abs(chart(a, a.sqrt() * x).norm() -
                                       (a.range_proj() * x).norm()));
    }
    out.push_back(measured("range_inner_isometry", iso, tol.eq_abs));
    out.push_back(measured("sqrt_coisometry", coiso, tol.eq_abs));
  }
  {
    double gap = 0.0;
    const Subspace kernel = a.kernel();
    for (int i = 0; i < kProbes; ++i) {
      const Vector u = a.sqrt() * probe.gaussian(n);
      const RangeVector ru = lift(weight, u, tol);
      Vector pre = ru.witness;
      if (!kernel.is_zero()) {
        pre += kernel.basis() * probe.gaussian(static_cast<Eigen::Index>(kernel.dim()));
      }
      gap = std::max(gap, range_norm(ru) - pre.norm());
    }
    out.push_back(measured("witness_norm_minimal", gap, tol.eq_abs));
  }
  const RangeSpaceProjection q = qas(weight, s, tol);
  {
    const Matrix& c = q.coord_matrix;
    const double err = (c - c.transpose()).norm() + (c * c - c).norm();
    out.push_back(measured("qas_chart_orthogonal_projection", err, tol.eq_abs));
  }
  out.push_back(flag("theta_pas_equals_qas", theta_pas_identity(a, s, tol)));
  out.push_back(flag("qas_range_image_matches_compatibility",
                     qas_range_image(a, s, tol).equals_image_of_s == compatible));
  {
    const Matrix theta_p = theta(a, pm, tol).chart;
    double err = 0.0;
    for (int i = 0; i < kProbes && !nn.is_zero() && k < n; ++i) {
      const ObliqueProjection r = family_member(
          a, s, probe.gaussian(static_cast<Eigen::Index>(nn.dim()), n - k), tol);
      err = std::max(err, (theta(a, r.matrix(), tol).chart - theta_p).norm() /
                              std::max(1.0, spectral_norm(r.matrix())));
    }
    out.push_back(measured("theta_constant_on_family", err, 10 * tol.eq_abs));
  }
  {
    const Matrix sharp = sharp_projection(a, s, tol);
    out.push_back(measured("sharp_projection_idempotent", (sharp * sharp - sharp).norm(),
                           tol.eq_abs * std::max(1.0, spectral_norm(sharp))));
    out.push_back(measured("sharp_projection_equals_range_pas",
                           (sharp - a.range_proj() * pm).norm(),
                           10 * tol.eq_abs * std::max(1.0, p_norm)));
  }
  out.push_back(flag("dense_sum", dense_sum_check(a, s, tol) == compatible));
  {
    const CompatibilityForms forms = compatibility_forms(a, s, tol);
    out.push_back(flag("compatibility_forms_agree",
                       forms.all_equal() && forms.compatible == compatible));
  }
  {
    // Extendable B: anything of the form X - P_R X P_N maps N(A) into N(A).
    double err = 0.0;
    const Matrix pn = Matrix::Identity(n, n) - a.range_proj();
    for (int i = 0; i < kProbes / 2; ++i) {
      Matrix b1 = probe.gaussian(n, n);
      Matrix b2 = probe.gaussian(n, n);
      b1 -= a.range_proj() * b1 * pn;
      b2 -= a.range_proj() * b2 * pn;
      const Matrix lhs = theta(a, b1 * b2, tol).chart;
      const Matrix rhs = theta(a, b1, tol).chart * theta(a, b2, tol).chart;
      err = std::max(err, (lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    out.push_back(measured("theta_multiplicative", err, 10 * tol.eq_abs));
  }

  // Interpolation.
  {
    double agree = 0.0;
    double optimal = 0.0;
    for (int i = 0; i < kProbes; ++i) {
      const Vector x = probe.gaussian(n);
      const SplineResult r = spline(a, s, x, tol);
      const Vector ref = spline_oracle(a.sqrt(), s, x, tol);
      agree = std::max(agree, (r.minimizer - ref).norm() / (1.0 + x.norm()));
      if (k > 0) {
        const Vector other = x + s.basis() * probe.gaussian(k);
        optimal = std::max(optimal, r.value - seminorm(a, other, tol));
      }
    }
    out.push_back(measured("spline_matches_normal_equations", agree, tol.eq_abs));
    out.push_back(measured("spline_optimal", optimal, tol.eq_abs * a_scale));
  }
  return out;
}

}  // namespace obliq
