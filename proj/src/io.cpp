#include "obliq/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace obliq::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::Parse, what); }

std::size_t size_field(const json& j, const char* key) {
  if (!j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(std::string("field \"") + key + "\" must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

Matrix matrix_from_json(const json& j, bool allow_empty_cols) {
  if (!j.is_object()) fail("matrix must be a JSON object");
  const std::size_t rows = size_field(j, "rows");
  const std::size_t cols = size_field(j, "cols");
  if (rows == 0 || (cols == 0 && !allow_empty_cols)) fail("matrix dimensions must be positive");
  if (!j.contains("data") || !j.at("data").is_array()) fail("missing array \"data\"");
  const json& data = j.at("data");
  if (data.size() != rows * cols) {
    fail("\"data\" has " + std::to_string(data.size()) + " entries, expected " +
         std::to_string(rows * cols));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      const json& v = data[i * cols + k];
      if (!v.is_number()) fail("matrix entries must be numbers");
      const double x = v.get<double>();
      if (!std::isfinite(x)) fail("matrix entries must be finite");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = x;
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(m(i, k));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Vector vector_from_json(const json& j) {
  const Matrix m = matrix_from_json(j);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  fail("vector must be an n x 1 or 1 x n matrix");
}

json vector_to_json(const Vector& v) { return matrix_to_json(Matrix(v)); }

Subspace subspace_from_json(const json& j, const Tolerance& tol) {
  if (!j.is_object()) fail("subspace must be a JSON object");
  const std::size_t ambient = size_field(j, "ambient");
  if (ambient == 0) fail("\"ambient\" must be positive");
  if (!j.contains("span")) fail("missing field \"span\"");
  const Matrix span = matrix_from_json(j.at("span"), true);
  if (static_cast<std::size_t>(span.rows()) != ambient) {
    throw Error(ErrorCode::DimensionMismatch, "span rows differ from \"ambient\"");
  }
  return subspace_from_span(span, tol);
}

json subspace_to_json(const Subspace& s) {
  return json{{"ambient", s.ambient_dim()}, {"span", matrix_to_json(s.basis())}};
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

}  // namespace obliq::io
