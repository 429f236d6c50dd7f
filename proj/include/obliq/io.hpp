#pragma once

// JSON file formats shared by the library and the command line:
//   matrix:   {"rows": n, "cols": m, "data": [row-major doubles]}
//   subspace: {"ambient": n, "span": <matrix>}   (columns span, canonicalised)

#include <string>

#include <json.hpp>

#include "obliq/kernel.hpp"

namespace obliq::io {

using json = nlohmann::json;

/// Throws Parse for malformed objects. `allow_empty_cols` admits n x 0
/// matrices, which only make sense as span sets.
Matrix matrix_from_json(const json& j, bool allow_empty_cols = false);
json matrix_to_json(const Matrix& m);

/// Vectors are n x 1 (or 1 x n) matrix objects.
Vector vector_from_json(const json& j);
json vector_to_json(const Vector& v);

Subspace subspace_from_json(const json& j, const Tolerance& tol);
/// Emits the canonical orthonormal basis as the span.
json subspace_to_json(const Subspace& s);

json parse_text(const std::string& text);
json read_file(const std::string& path);

}  // namespace obliq::io
