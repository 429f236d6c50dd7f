#include "obliq/obliq.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "obliq/douglas.hpp"
#include "obliq/interpolant.hpp"
#include "obliq/io.hpp"
#include "obliq/job.hpp"
#include "obliq/oblique.hpp"
#include "obliq/oprange.hpp"

struct obliq_matrix {
  obliq::Matrix m;
};
struct obliq_weight {
  std::shared_ptr<const obliq::PsdOperator> a;
};
struct obliq_subspace {
  obliq::Subspace s;
};

namespace {

thread_local std::string g_last_error;

obliq_status status_for(obliq::ErrorCode code) {
  using obliq::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return OBLIQ_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return OBLIQ_ERR_DIMENSION_MISMATCH;
    case ErrorCode::Parse: return OBLIQ_ERR_PARSE;
    case ErrorCode::NotPsd: return OBLIQ_ERR_NOT_PSD;
    case ErrorCode::NotContained: return OBLIQ_ERR_NOT_CONTAINED;
    case ErrorCode::NoSolution: return OBLIQ_ERR_NO_SOLUTION;
    case ErrorCode::Incompatible: return OBLIQ_ERR_INCOMPATIBLE;
    case ErrorCode::Singular: return OBLIQ_ERR_SINGULAR;
    case ErrorCode::RangeMismatch: return OBLIQ_ERR_RANGE_MISMATCH;
    case ErrorCode::NotInRange: return OBLIQ_ERR_NOT_IN_RANGE;
    case ErrorCode::NotExtendable: return OBLIQ_ERR_NOT_EXTENDABLE;
    case ErrorCode::WeightMismatch: return OBLIQ_ERR_WEIGHT_MISMATCH;
    case ErrorCode::IdentityViolation: return OBLIQ_ERR_IDENTITY_VIOLATION;
  }
  return OBLIQ_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
obliq_status guarded(Fn&& fn) noexcept {
  g_last_error.clear();
  try {
    fn();
    return OBLIQ_OK;
  } catch (const obliq::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return OBLIQ_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) {
    throw obliq::Error(obliq::ErrorCode::InvalidArgument, std::string(what) + " is null");
  }
}

obliq::Tolerance tolerance(const obliq_tolerance* t) {
  obliq::Tolerance out;
  if (t != nullptr) out = {t->rank_rel, t->eq_abs, t->psd_neg};
  out.validate();
  return out;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

obliq_matrix* wrap(obliq::Matrix m) { return new obliq_matrix{std::move(m)}; }

obliq::Vector read_vector(const double* data, std::size_t n) {
  require(data, "vector");
  return Eigen::Map<const obliq::Vector>(data, static_cast<Eigen::Index>(n));
}

}  // namespace

extern "C" {

const char* obliq_version(void) { return obliq::kVersion; }

const char* obliq_status_name(obliq_status status) {
  switch (status) {
    case OBLIQ_OK: return "OK";
    case OBLIQ_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case OBLIQ_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case OBLIQ_ERR_PARSE: return "Parse";
    case OBLIQ_ERR_NOT_PSD: return "NotPsd";
    case OBLIQ_ERR_NOT_CONTAINED: return "NotContained";
    case OBLIQ_ERR_NO_SOLUTION: return "NoSolution";
    case OBLIQ_ERR_INCOMPATIBLE: return "Incompatible";
    case OBLIQ_ERR_SINGULAR: return "Singular";
    case OBLIQ_ERR_RANGE_MISMATCH: return "RangeMismatch";
    case OBLIQ_ERR_NOT_IN_RANGE: return "NotInRange";
    case OBLIQ_ERR_NOT_EXTENDABLE: return "NotExtendable";
    case OBLIQ_ERR_WEIGHT_MISMATCH: return "WeightMismatch";
    case OBLIQ_ERR_IDENTITY_VIOLATION: return "IdentityViolation";
    case OBLIQ_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* obliq_last_error_message(void) { return g_last_error.c_str(); }

obliq_tolerance obliq_default_tolerance(void) {
  const obliq::Tolerance t;
  return {t.rank_rel, t.eq_abs, t.psd_neg};
}

void obliq_string_free(char* s) { std::free(s); }

obliq_status obliq_matrix_create(size_t rows, size_t cols, const double* data,
                                 obliq_matrix** out) {
  return guarded([&] {
    require(out, "out");
    require(data, "data");
    if (rows == 0 || cols == 0) {
      throw obliq::Error(obliq::ErrorCode::DimensionMismatch, "matrix dimensions must be positive");
    }
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    obliq::Matrix m = Eigen::Map<const RowMajor>(data, static_cast<Eigen::Index>(rows),
                                                 static_cast<Eigen::Index>(cols));
    obliq::require_finite(m, "matrix");
    *out = wrap(std::move(m));
  });
}

obliq_status obliq_matrix_parse_json(const char* text, obliq_matrix** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = wrap(obliq::io::matrix_from_json(obliq::io::parse_text(text)));
  });
}

obliq_status obliq_matrix_to_json(const obliq_matrix* m, char** out) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    *out = copy_string(obliq::io::matrix_to_json(m->m).dump());
  });
}

size_t obliq_matrix_rows(const obliq_matrix* m) {
  return m ? static_cast<size_t>(m->m.rows()) : 0;
}

size_t obliq_matrix_cols(const obliq_matrix* m) {
  return m ? static_cast<size_t>(m->m.cols()) : 0;
}

obliq_status obliq_matrix_copy_data(const obliq_matrix* m, double* out, size_t len) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    if (len != static_cast<size_t>(m->m.size())) {
      throw obliq::Error(obliq::ErrorCode::DimensionMismatch, "buffer length differs from rows*cols");
    }
    for (Eigen::Index i = 0; i < m->m.rows(); ++i) {
      for (Eigen::Index k = 0; k < m->m.cols(); ++k) *out++ = m->m(i, k);
    }
  });
}

void obliq_matrix_destroy(obliq_matrix* m) { delete m; }

obliq_status obliq_weight_create(const obliq_matrix* a, const obliq_tolerance* tol,
                                 obliq_weight** out) {
  return guarded([&] {
    require(a, "matrix");
    require(out, "out");
    *out = new obliq_weight{std::make_shared<const obliq::PsdOperator>(a->m, tolerance(tol))};
  });
}

size_t obliq_weight_dim(const obliq_weight* w) { return w ? w->a->dim() : 0; }
size_t obliq_weight_rank(const obliq_weight* w) { return w ? w->a->rank() : 0; }
void obliq_weight_destroy(obliq_weight* w) { delete w; }

obliq_status obliq_subspace_from_span(const obliq_matrix* vectors, const obliq_tolerance* tol,
                                      obliq_subspace** out) {
  return guarded([&] {
    require(vectors, "vectors");
    require(out, "out");
    *out = new obliq_subspace{obliq::subspace_from_span(vectors->m, tolerance(tol))};
  });
}

obliq_status obliq_subspace_parse_json(const char* text, const obliq_tolerance* tol,
                                       obliq_subspace** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new obliq_subspace{
        obliq::io::subspace_from_json(obliq::io::parse_text(text), tolerance(tol))};
  });
}

size_t obliq_subspace_dim(const obliq_subspace* s) { return s ? s->s.dim() : 0; }
size_t obliq_subspace_ambient(const obliq_subspace* s) { return s ? s->s.ambient_dim() : 0; }

obliq_status obliq_subspace_basis(const obliq_subspace* s, obliq_matrix** out) {
  return guarded([&] {
    require(s, "subspace");
    require(out, "out");
    if (s->s.is_zero()) {
      throw obliq::Error(obliq::ErrorCode::InvalidArgument, "zero subspace has an empty basis");
    }
    *out = wrap(s->s.basis());
  });
}

void obliq_subspace_destroy(obliq_subspace* s) { delete s; }

obliq_status obliq_is_compatible(const obliq_weight* a, const obliq_subspace* s,
                                 const obliq_tolerance* tol, int* out) {
  return guarded([&] {
    require(a, "weight");
    require(s, "subspace");
    require(out, "out");
    *out = obliq::is_compatible(*a->a, s->s, tolerance(tol)) ? 1 : 0;
  });
}

obliq_status obliq_project(const obliq_weight* a, const obliq_subspace* s,
                           obliq_formula formula, const obliq_tolerance* tol,
                           obliq_matrix** out) {
  return guarded([&] {
    require(a, "weight");
    require(s, "subspace");
    require(out, "out");
    const obliq::Tolerance t = tolerance(tol);
    switch (formula) {
      case OBLIQ_FORMULA_BLOCK: *out = wrap(obliq::pas(*a->a, s->s, t).matrix()); return;
      case OBLIQ_FORMULA_PINV: *out = wrap(obliq::pas_closed_range(*a->a, s->s, t).matrix()); return;
      case OBLIQ_FORMULA_INVERTIBLE: *out = wrap(obliq::pas_invertible(*a->a, s->s, t).matrix()); return;
    }
    throw obliq::Error(obliq::ErrorCode::InvalidArgument, "unknown formula");
  });
}

obliq_status obliq_compat(const obliq_weight* a, const obliq_subspace* s,
                          const obliq_tolerance* tol, obliq_compat_info* out) {
  return guarded([&] {
    require(a, "weight");
    require(s, "subspace");
    require(out, "out");
    const obliq::CompatibilityReport r = obliq::diagnostics_chain(*a->a, s->s, tolerance(tol));
    out->compatible = r.compatible;
    out->sum_check = r.sum_check;
    const auto flags = r.chain.as_array();
    for (std::size_t i = 0; i < flags.size(); ++i) out->chain[i] = flags[i];
    out->implications_hold = r.chain.implications_hold();
    out->dim_n = r.n.dim();
  });
}

obliq_status obliq_douglas(const obliq_matrix* a, const obliq_matrix* b,
                           const obliq_tolerance* tol, int least_squares, obliq_matrix** d,
                           double* norm_sq, double* residual) {
  return guarded([&] {
    require(a, "A");
    require(b, "B");
    const obliq::Tolerance t = tolerance(tol);
    const obliq::ReducedSolution sol = least_squares
                                           ? obliq::least_squares_solution(a->m, b->m, t)
                                           : obliq::reduced_solution(a->m, b->m, t);
    if (norm_sq) *norm_sq = sol.norm_sq;
    if (residual) *residual = sol.residual;
    if (d) *d = wrap(sol.d);
  });
}

obliq_status obliq_minimal_lambda(const obliq_matrix* a, const obliq_matrix* b,
                                  const obliq_tolerance* tol, double* out) {
  return guarded([&] {
    require(a, "A");
    require(b, "B");
    require(out, "out");
    *out = obliq::minimal_lambda(a->m, b->m, tolerance(tol));
  });
}

obliq_status obliq_range_inner(const obliq_weight* a, const double* u, const double* v,
                               const obliq_tolerance* tol, double* out) {
  return guarded([&] {
    require(a, "weight");
    require(out, "out");
    const obliq::Tolerance t = tolerance(tol);
    const std::size_t n = a->a->dim();
    const obliq::RangeVector x = obliq::lift(a->a, read_vector(u, n), t);
    const obliq::RangeVector y = obliq::lift(a->a, read_vector(v, n), t);
    *out = obliq::range_inner(x, y);
  });
}

obliq_status obliq_qas(const obliq_weight* a, const obliq_subspace* s,
                       const obliq_tolerance* tol, obliq_matrix** chart) {
  return guarded([&] {
    require(a, "weight");
    require(s, "subspace");
    require(chart, "chart");
    *chart = wrap(obliq::qas(a->a, s->s, tolerance(tol)).coord_matrix);
  });
}

obliq_status obliq_theta(const obliq_weight* a, const obliq_matrix* b,
                         const obliq_tolerance* tol, obliq_matrix** chart) {
  return guarded([&] {
    require(a, "weight");
    require(b, "B");
    require(chart, "chart");
    *chart = wrap(obliq::theta(*a->a, b->m, tolerance(tol)).chart);
  });
}

obliq_status obliq_spline(const obliq_matrix* t_factor, const obliq_subspace* s,
                          const double* x, const obliq_tolerance* tol, double* minimizer,
                          double* value, int* unique) {
  return guarded([&] {
    require(t_factor, "factor");
    require(s, "subspace");
    require(minimizer, "minimizer");
    const std::size_t n = s->s.ambient_dim();
    const obliq::SplineResult r =
        obliq::spline(t_factor->m, s->s, read_vector(x, n), tolerance(tol));
    Eigen::Map<obliq::Vector>(minimizer, static_cast<Eigen::Index>(n)) = r.minimizer;
    if (value) *value = r.value;
    if (unique) *unique = r.unique ? 1 : 0;
  });
}

obliq_status obliq_run_job(const char* job_json, char** report_json, int* exit_code) {
  obliq::JobOutcome outcome;
  const obliq_status st = guarded([&] {
    require(job_json, "job");
    require(exit_code, "exit_code");
    outcome = obliq::run(obliq::job_from_json(obliq::io::parse_text(job_json)));
  });
  if (st != OBLIQ_OK) {
    if (exit_code) *exit_code = obliq::kExitMalformed;
    return st;
  }
  *exit_code = outcome.exit_code;
  g_last_error = outcome.error;
  if (report_json) {
    *report_json = outcome.report.empty() ? nullptr : copy_string(outcome.report);
  }
  return OBLIQ_OK;
}

}  // extern "C"
