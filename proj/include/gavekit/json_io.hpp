#pragma once

#include <json.hpp>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "gavekit/model.hpp"

namespace gavekit {

namespace detail {

// Accepts a JSON number or an exact-rational string "p/q".
inline double number_from(const nlohmann::json& v, const std::string& field) {
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError(ErrorCode::NonFinite, "field " + field + ": non-finite number");
    return x;
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == s.size())
      throw InputError(ErrorCode::BadField, "field " + field + ": expected rational string \"p/q\"");
    long long p = 0, q = 0;
    const auto r1 = std::from_chars(s.data(), s.data() + slash, p);
    const auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size(), q);
    if (r1.ec != std::errc{} || r1.ptr != s.data() + slash || r2.ec != std::errc{} ||
        r2.ptr != s.data() + s.size() || q == 0)
      throw InputError(ErrorCode::BadField, "field " + field + ": malformed rational \"" + s + "\"");
    return static_cast<double>(p) / static_cast<double>(q);
  }
  throw InputError(ErrorCode::BadField, "field " + field + ": expected number or rational string");
}

inline Matrix matrix_from(const nlohmann::json& rows, Index want_rows, Index want_cols,
                          const std::string& field) {
  if (!rows.is_array() || rows.size() != want_rows)
    throw InputError(ErrorCode::DimensionMismatch, "field " + field + ": expected " + std::to_string(want_rows) + " rows");
  std::vector<double> entries;
  entries.reserve(want_rows * want_cols);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != want_cols)
      throw InputError(ErrorCode::RaggedRows, "field " + field + ": ragged or mis-sized row");
    for (const auto& v : row) entries.push_back(number_from(v, field));
  }
  return Matrix(want_rows, want_cols, std::move(entries));
}

inline Vector vector_from(const nlohmann::json& arr, Index want_len, const std::string& field) {
  if (!arr.is_array() || arr.size() != want_len)
    throw InputError(ErrorCode::DimensionMismatch, "field " + field + ": expected length " + std::to_string(want_len));
  std::vector<double> entries;
  entries.reserve(want_len);
  for (const auto& v : arr) entries.push_back(number_from(v, field));
  return Vector(std::move(entries));
}

inline nlohmann::json matrix_to(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json vector_to(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline nlohmann::json parse_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw InputError(ErrorCode::BadJson, "malformed JSON document");
  return j;
}

}  // namespace detail

// Instance schema: {"m": int, "n": int, "A": [[...]], "B": [[...]], "b": [...]}
inline GaveInstance parse_instance(const std::string& text) {
  const nlohmann::json j = detail::parse_json(text);
  if (!j.is_object()) throw InputError(ErrorCode::BadJson, "instance document must be a JSON object");
  for (const char* field : {"m", "n", "A", "B", "b"})
    if (!j.contains(field)) throw InputError(ErrorCode::BadField, std::string("field ") + field + ": missing");
  if (!j["m"].is_number_integer() || !j["n"].is_number_integer())
    throw InputError(ErrorCode::BadField, "field m/n: expected integers");
  const long long m = j["m"].get<long long>(), n = j["n"].get<long long>();
  if (m < 1 || n < 1) throw InputError(ErrorCode::BadField, "field m/n: must be positive");
  return GaveInstance(detail::matrix_from(j["A"], static_cast<Index>(m), static_cast<Index>(n), "A"),
                      detail::matrix_from(j["B"], static_cast<Index>(m), static_cast<Index>(n), "B"),
                      detail::vector_from(j["b"], static_cast<Index>(m), "b"));
}

// Canonical form: sorted keys, shortest round-trip doubles.
inline std::string serialize_instance(const GaveInstance& inst) {
  nlohmann::json j;
  j["m"] = inst.m();
  j["n"] = inst.n();
  j["A"] = detail::matrix_to(inst.A);
  j["B"] = detail::matrix_to(inst.B);
  j["b"] = detail::vector_to(inst.b);
  return j.dump(2) + "\n";
}

inline nlohmann::json pattern_to_json(const SignPattern& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (int v : s.entries()) arr.push_back(v);
  return arr;
}

inline SignPattern pattern_from_json(const nlohmann::json& arr, const std::string& field) {
  if (!arr.is_array()) throw InputError(ErrorCode::BadField, "field " + field + ": expected array");
  std::vector<int> s;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) throw InputError(ErrorCode::BadField, "field " + field + ": expected -1/0/1");
    s.push_back(v.get<int>());
  }
  return SignPattern(std::move(s));
}

inline nlohmann::json solution_to_json(const SolutionRecord& rec) {
  nlohmann::json j;
  j["x"] = detail::vector_to(rec.x);
  j["residual_inf"] = rec.residual_inf;
  j["pattern"] = pattern_to_json(rec.pattern);
  j["multiplicity"] = multiplicity_name(rec.multiplicity);
  return j;
}

// Solution files only need "x"; the remaining record fields are recomputed.
inline Vector solution_vector_from_json(const std::string& text, Index n) {
  const nlohmann::json j = detail::parse_json(text);
  if (j.is_array()) return detail::vector_from(j, n, "x");
  if (j.is_object() && j.contains("x")) return detail::vector_from(j["x"], n, "x");
  throw InputError(ErrorCode::BadField, "field x: solution document needs an \"x\" array");
}

// Splitting files: {"target": "A"|"B", "M": [[...]], "N": [[...]]?}
inline Splitting parse_splitting(const std::string& text, const GaveInstance& inst) {
  const nlohmann::json j = detail::parse_json(text);
  if (!j.is_object() || !j.contains("target") || !j.contains("M"))
    throw InputError(ErrorCode::BadField, "field target/M: splitting document needs both");
  const std::string t = j["target"].get<std::string>();
  if (t != "A" && t != "B") throw InputError(ErrorCode::BadField, "field target: expected \"A\" or \"B\"");
  const SplitTarget target = t == "A" ? SplitTarget::OnA : SplitTarget::OnB;
  Matrix m_part = detail::matrix_from(j["M"], inst.m(), inst.n(), "M");
  if (j.contains("N")) {
    const Matrix n_part = detail::matrix_from(j["N"], inst.m(), inst.n(), "N");
    validate_splitting_pair(inst, target, m_part, n_part);
  }
  return Splitting::make(inst, target, std::move(m_part));
}

inline nlohmann::json splitting_to_json(const Splitting& s) {
  nlohmann::json j;
  j["target"] = s.target == SplitTarget::OnA ? "A" : "B";
  j["M"] = detail::matrix_to(s.M);
  j["N"] = detail::matrix_to(s.N);
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(ErrorCode::BadField, "file " + path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(ErrorCode::BadField, "file " + path + ": cannot open for writing");
  out << contents;
}

}  // namespace gavekit
