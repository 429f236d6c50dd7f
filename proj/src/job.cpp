#include "obliq/job.hpp"

#include <fstream>

#include <Eigen/Core>

#include "obliq/battery.hpp"
#include "obliq/douglas.hpp"
#include "obliq/interpolant.hpp"
#include "obliq/io.hpp"
#include "obliq/oblique.hpp"
#include "obliq/oprange.hpp"

namespace obliq {

using nlohmann::json;

std::optional<Command> parse_command(const std::string& name) {
  if (name == "compat") return Command::Compat;
  if (name == "project") return Command::Project;
  if (name == "douglas") return Command::Douglas;
  if (name == "interpolate") return Command::Interpolate;
  if (name == "oprange") return Command::Oprange;
  if (name == "report") return Command::Report;
  return std::nullopt;
}

std::optional<Formula> parse_formula(const std::string& name) {
  if (name == "block") return Formula::Block;
  if (name == "pinv") return Formula::Pinv;
  if (name == "invertible") return Formula::Invertible;
  return std::nullopt;
}

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::Compat: return "compat";
    case Command::Project: return "project";
    case Command::Douglas: return "douglas";
    case Command::Interpolate: return "interpolate";
    case Command::Oprange: return "oprange";
    case Command::Report: return "report";
  }
  return "?";
}

const char* to_string(Formula f) noexcept {
  switch (f) {
    case Formula::Block: return "block";
    case Formula::Pinv: return "pinv";
    case Formula::Invertible: return "invertible";
  }
  return "?";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::Parse:
      return kExitMalformed;
    case ErrorCode::IdentityViolation:
      return kExitIdentity;
    default:
      return kExitPrecondition;
  }
}

namespace {

const std::string& require(const std::optional<std::string>& path, const char* flag) {
  if (!path) throw Error(ErrorCode::Parse, std::string("missing ") + flag);
  return *path;
}

// Empty matrices (for example the d-block when S is trivial) have no valid
// file representation, so they are emitted as null.
json emit(const Matrix& m) { return m.size() == 0 ? json(nullptr) : io::matrix_to_json(m); }

json check_json(const Check& c) {
  json j{{"name", c.name}, {"passed", c.passed}};
  if (c.skipped) j["skipped"] = true;
  if (c.bound > 0.0 || c.value != 0.0) {
    j["value"] = c.value;
    j["bound"] = c.bound;
  }
  return j;
}

struct Inputs {
  json echo = json::object();
  std::optional<Matrix> a;
  std::optional<Subspace> s;
};

Inputs load(const JobSpec& job, bool need_a, bool need_s) {
  Inputs in;
  if (need_a) {
    const std::string& path = require(job.input_a, "--input-a");
    in.a = io::matrix_from_json(io::read_file(path));
    in.echo["a"] = {{"path", path}, {"matrix", io::matrix_to_json(*in.a)}};
  }
  if (need_s) {
    const std::string& path = require(job.input_s, "--input-s");
    in.s = io::subspace_from_json(io::read_file(path), job.tol);
    in.echo["s"] = {{"path", path}, {"subspace", io::subspace_to_json(*in.s)}};
  }
  return in;
}

json chain_json(const ChainFlags& c) {
  return json{{"compatible", c.compatible},
              {"image_closed_in_range", c.image_closed_in_range},
              {"preimage_of_image", c.preimage_of_image},
              {"sqrt_image_closed_in_range", c.sqrt_image_closed_in_range},
              {"sum_with_kernel_closed", c.sum_with_kernel_closed},
              {"range_projection_closed", c.range_projection_closed}};
}

ObliqueProjection build(Formula f, const PsdOperator& a, const Subspace& s,
                        const Tolerance& tol) {
  switch (f) {
    case Formula::Pinv: return pas_closed_range(a, s, tol);
    case Formula::Invertible: return pas_invertible(a, s, tol);
    case Formula::Block: break;
  }
  return pas(a, s, tol);
}

void run_compat(const JobSpec& job, json& inputs, json& results, json&) {
  Inputs in = load(job, true, true);
  inputs = std::move(in.echo);
  const PsdOperator a(*in.a, job.tol);
  const CompatibilityReport r = diagnostics_chain(a, *in.s, job.tol);
  results = json{{"compatible", r.compatible},
                 {"sum_check", r.sum_check},
                 {"n", io::subspace_to_json(r.n)},
                 {"preimage_perp", io::subspace_to_json(r.preimage_perp)},
                 {"d", emit(r.d)},
                 {"pas", r.pas ? io::matrix_to_json(r.pas->matrix()) : json(nullptr)},
                 {"chain", chain_json(r.chain)},
                 {"implications_hold", r.chain.implications_hold()},
                 {"projected_compatible", r.projected_compatible},
                 {"shifted_compatible", r.shifted_compatible},
                 {"rank", a.rank()}};
}

void run_project(const JobSpec& job, json& inputs, json& results, json& checks) {
  Inputs in = load(job, true, true);
  inputs = std::move(in.echo);
  inputs["formula"] = to_string(job.formula);
  const PsdOperator a(*in.a, job.tol);
  const Subspace& s = *in.s;
  const ObliqueProjection p = build(job.formula, a, s, job.tol);
  const Matrix& m = p.matrix();
  results = json{{"formula", to_string(job.formula)},
                 {"projection", io::matrix_to_json(m)},
                 {"range", io::subspace_to_json(p.range())},
                 {"nullspace", io::subspace_to_json(p.nullspace())},
                 {"idempotence_error", (m * m - m).norm()},
                 {"hermitian_error", (a.base() * m - m.transpose() * a.base()).norm()}};
  const double bound = 10 * job.tol.eq_abs * std::max(1.0, spectral_norm(m));
  for (Formula other : {Formula::Block, Formula::Pinv, Formula::Invertible}) {
    if (other == job.formula) continue;
    const std::string name = std::string("agrees_with_") + to_string(other);
    if (other == Formula::Invertible && !a.full_rank()) {
      checks.push_back(check_json(Check{name, true, true, 0.0, 0.0}));
      continue;
    }
    const double err = (build(other, a, s, job.tol).matrix() - m).norm();
    checks.push_back(check_json(Check{name, err <= bound, false, err, bound}));
  }
}

void run_douglas(const JobSpec& job, json& inputs, json& results, json&) {
  const Matrix a = io::matrix_from_json(io::read_file(require(job.input_a, "--input-a")));
  const Matrix b = io::matrix_from_json(io::read_file(require(job.input_b, "--input-b")));
  inputs = json{{"a", {{"path", *job.input_a}, {"matrix", io::matrix_to_json(a)}}},
                {"b", {{"path", *job.input_b}, {"matrix", io::matrix_to_json(b)}}},
                {"least_squares", job.least_squares}};
  const bool feasible = range_inclusion(b, a, job.tol);
  if (!feasible && !job.least_squares) {
    throw Error(ErrorCode::NoSolution, "R(B) is not contained in R(A)");
  }
  const ReducedSolution sol =
      feasible ? reduced_solution(a, b, job.tol) : least_squares_solution(a, b, job.tol);
  results = json{{"mode", feasible ? "reduced_solution" : "least_squares_outside_theorem"},
                 {"range_inclusion", feasible},
                 {"d", io::matrix_to_json(sol.d)},
                 {"norm_sq", sol.norm_sq},
                 {"residual", sol.residual},
                 {"minimal_lambda", feasible ? json(minimal_lambda(a, b, job.tol)) : json(nullptr)}};
}

void run_interpolate(const JobSpec& job, json& inputs, json& results, json& checks) {
  Inputs in = load(job, !job.input_t.has_value(), true);
  inputs = std::move(in.echo);
  const Vector x = io::vector_from_json(io::read_file(require(job.input_x, "--input-x")));
  inputs["x"] = {{"path", *job.input_x}, {"vector", io::vector_to_json(x)}};
  Matrix factor;
  if (job.input_t) {
    factor = io::matrix_from_json(io::read_file(*job.input_t));
    inputs["t"] = {{"path", *job.input_t}, {"matrix", io::matrix_to_json(factor)}};
  } else {
    factor = PsdOperator(*in.a, job.tol).sqrt();
  }
  const SplineResult r = spline(factor, *in.s, x, job.tol);
  results = json{{"minimizer", io::vector_to_json(r.minimizer)},
                 {"value", r.value},
                 {"unique", r.unique},
                 {"nonempty", true},
                 {"solution_directions", io::subspace_to_json(r.solution_directions)}};
  const double err = (spline_oracle(factor, *in.s, x, job.tol) - r.minimizer).norm();
  const double bound = job.tol.eq_abs * (1.0 + x.norm());
  checks.push_back(check_json(Check{"agrees_with_normal_equations", err <= bound, false, err, bound}));
}

void run_oprange(const JobSpec& job, json& inputs, json& results, json& checks) {
  Inputs in = load(job, true, true);
  inputs = std::move(in.echo);
  const PsdOperator a(*in.a, job.tol);
  const Subspace& s = *in.s;
  const bool compatible = is_compatible(a, s, job.tol);
  const RangeSpaceProjection q = qas(a, s, job.tol);
  const RangeImage img = qas_range_image(a, s, job.tol);
  results = json{{"qas_chart", io::matrix_to_json(q.coord_matrix)},
                 {"range_image", io::subspace_to_json(q.range_image)},
                 {"null_image", io::subspace_to_json(q.null_image)},
                 {"qas_of_range", io::subspace_to_json(img.image)},
                 {"qas_of_range_equals_image_of_s", img.equals_image_of_s},
                 {"sharp_projection", io::matrix_to_json(sharp_projection(a, s, job.tol))},
                 {"dense_sum", dense_sum_check(a, s, job.tol)},
                 {"compatible", compatible}};
  if (compatible) {
    const ObliqueProjection p = pas(a, s, job.tol);
    results["theta_pas_chart"] = io::matrix_to_json(theta(a, p.matrix(), job.tol).chart);
    results["theta_pas_equals_qas"] = theta_pas_identity(a, s, job.tol);
  } else {
    results["theta_pas_chart"] = nullptr;
    results["theta_pas_equals_qas"] = nullptr;
  }
  if (job.input_b) {
    const Matrix b = io::matrix_from_json(io::read_file(*job.input_b));
    inputs["b"] = {{"path", *job.input_b}, {"matrix", io::matrix_to_json(b)}};
    const ThetaResult t = theta(a, b, job.tol);
    results["theta_b"] = {{"chart", io::matrix_to_json(t.chart)},
                          {"kernel_invariant", t.kernel_invariant},
                          {"bounded", t.bounded}};
  }
  checks.push_back(check_json(
      Check{"qas_of_range_matches_compatibility", img.equals_image_of_s == compatible, false, 0, 0}));
  if (compatible) {
    checks.push_back(check_json(Check{"theta_pas_equals_qas",
                                      results["theta_pas_equals_qas"].get<bool>(), false, 0, 0}));
  }
}

void run_report(const JobSpec& job, json& inputs, json& results, json& checks) {
  Inputs in = load(job, true, true);
  inputs = std::move(in.echo);
  inputs["seed"] = job.seed;
  const PsdOperator a(*in.a, job.tol);
  const Subspace& s = *in.s;
  const std::vector<Check> battery = run_battery(a, s, job.tol, job.seed);
  std::size_t failed = 0;
  for (const Check& c : battery) {
    checks.push_back(check_json(c));
    if (!c.passed) ++failed;
  }
  results = json{{"dim", a.dim()},
                 {"rank", a.rank()},
                 {"dim_s", s.dim()},
                 {"dim_n", degenerate_part(a, s, job.tol).dim()},
                 {"compatible", is_compatible(a, s, job.tol)},
                 {"checks_run", battery.size()},
                 {"checks_failed", failed}};
}

}  // namespace

JobOutcome run(const JobSpec& job) {
  JobOutcome outcome;
  try {
    job.tol.validate();
    json inputs = json::object();
    json results = json::object();
    json checks = json::array();
    switch (job.command) {
      case Command::Compat: run_compat(job, inputs, results, checks); break;
      case Command::Project: run_project(job, inputs, results, checks); break;
      case Command::Douglas: run_douglas(job, inputs, results, checks); break;
      case Command::Interpolate: run_interpolate(job, inputs, results, checks); break;
      case Command::Oprange: run_oprange(job, inputs, results, checks); break;
      case Command::Report: run_report(job, inputs, results, checks); break;
    }
    json report{{"command", to_string(job.command)},
                {"inputs", std::move(inputs)},
                {"results", std::move(results)},
                {"checks", checks},
                {"tolerances",
                 {{"rank_rel", job.tol.rank_rel},
                  {"eq_abs", job.tol.eq_abs},
                  {"psd_neg", job.tol.psd_neg}}},
                {"versions",
                 {{"obliq", kVersion},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)},
                  {"report_format", 1}}}};
    outcome.report = report.dump(2) + "\n";
    for (const json& c : checks) {
      if (!c.at("passed").get<bool>()) outcome.exit_code = kExitIdentity;
    }
    if (job.output) {
      std::ofstream out(*job.output, std::ios::binary);
      if (!out) throw Error(ErrorCode::Parse, "cannot write " + *job.output);
      out << outcome.report;
    }
  } catch (const Error& e) {
    outcome.exit_code = exit_code_for(e.code());
    outcome.report.clear();
    outcome.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return outcome;
}

JobSpec job_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "job must be a JSON object");
  JobSpec job;
  const auto command = parse_command(j.value("command", std::string{}));
  if (!command) throw Error(ErrorCode::Parse, "unknown or missing command");
  job.command = *command;
  auto path = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_string()) throw Error(ErrorCode::Parse, std::string(key) + " must be a string");
    return j.at(key).get<std::string>();
  };
  job.input_a = path("input_a");
  job.input_s = path("input_s");
  job.input_b = path("input_b");
  job.input_x = path("input_x");
  job.input_t = path("input_t");
  job.output = path("output");
  try {
    job.tol.rank_rel = j.value("tol_rank", job.tol.rank_rel);
    job.tol.eq_abs = j.value("tol_eq", job.tol.eq_abs);
    job.tol.psd_neg = j.value("tol_psd", job.tol.psd_neg);
    job.seed = j.value("seed", std::uint64_t{0});
    job.least_squares = j.value("least_squares", false);
    const auto formula = parse_formula(j.value("formula", std::string("block")));
    if (!formula) throw Error(ErrorCode::Parse, "unknown formula");
    job.formula = *formula;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad job field: ") + e.what());
  }
  return job;
}

json job_to_json(const JobSpec& job) {
  json j{{"command", to_string(job.command)},
         {"tol_rank", job.tol.rank_rel},
         {"tol_eq", job.tol.eq_abs},
         {"tol_psd", job.tol.psd_neg},
         {"seed", job.seed},
         {"formula", to_string(job.formula)},
         {"least_squares", job.least_squares}};
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) j[key] = *v;
  };
  put("input_a", job.input_a);
  put("input_s", job.input_s);
  put("input_b", job.input_b);
  put("input_x", job.input_x);
  put("input_t", job.input_t);
  put("output", job.output);
  return j;
}

}  // namespace obliq
