#include <cmath>
#include <string>

#include "kgframe/errors.hpp"
#include "kgframe/json_io.hpp"

namespace kgframe {

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ParseError, path + ": " + what);
}

double number_from_json(const json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, path + ": non-finite value");
  return x;
}

std::size_t count_from_json(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) parse_fail(path, "expected a non-negative integer");
  if (j.is_number_integer() && j.get<std::int64_t>() < 0) parse_fail(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

const json& member(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_square(const ComplexMatrix& m, std::size_t n, const std::string& field) {
  if (m.rows() != n || m.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, field + ": expected " + std::to_string(n) + "x" +
                                                  std::to_string(n) + ", got " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()));
}

}  // namespace

json complex_to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(std::span<const cplx> v) {
  json out = json::array();
  for (cplx z : v) out.push_back(complex_to_json(z));
  return out;
}

json system_to_json(const GFrameSystem& sys) {
  json blocks = json::array();
  for (const auto& op : sys.operators()) blocks.push_back(json{{"dim", op.rows()}, {"matrix", matrix_to_json(op)}});
  return json{{"ambient_dim", sys.ambient_dim()}, {"blocks", std::move(blocks)}};
}

cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {number_from_json(j, path), 0.0};
  if (!j.is_object()) parse_fail(path, "expected {\"re\", \"im\"} or a number");
  const double re = number_from_json(member(j, "re", path), path + ".re");
  double im = 0.0;
  if (const auto it = j.find("im"); it != j.end()) im = number_from_json(*it, path + ".im");
  return {re, im};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path, "expected an array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<cplx> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    const std::string rp = index_path(path, r);
    if (!row.is_array()) parse_fail(rp, "expected an array");
    if (r == 0) {
      cols = row.size();
    } else if (row.size() != cols) {
      parse_fail(rp, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) entries.push_back(complex_from_json(row[c], index_path(rp, c)));
  }
  if (cols == 0) return ComplexMatrix(rows == 0 ? 0 : rows, 0);
  return ComplexMatrix(rows, cols, std::move(entries));
}

CVector vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path, "expected an array");
  CVector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(complex_from_json(j[i], index_path(path, i)));
  return v;
}

GFrameSystem system_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  const std::size_t n = count_from_json(member(j, "ambient_dim", path), path + ".ambient_dim");
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, path + ".ambient_dim: must be positive");
  const json& blocks = member(j, "blocks", path);
  if (!blocks.is_array()) parse_fail(path + ".blocks", "expected an array");
  if (blocks.empty()) throw Error(ErrorKind::DimensionMismatch, path + ".blocks: at least one block required");
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string bp = index_path(path + ".blocks", i);
    const json& b = blocks[i];
    if (!b.is_object()) parse_fail(bp, "expected an object");
    const std::size_t m = count_from_json(member(b, "dim", bp), bp + ".dim");
    ComplexMatrix op = matrix_from_json(member(b, "matrix", bp), bp + ".matrix");
    if (m == 0) throw Error(ErrorKind::DimensionMismatch, bp + ".dim: must be positive");
    if (op.rows() != m || op.cols() != n)
      throw Error(ErrorKind::DimensionMismatch, bp + ".matrix: expected " + std::to_string(m) + "x" +
                                                    std::to_string(n) + ", got " + std::to_string(op.rows()) +
                                                    "x" + std::to_string(op.cols()));
    ops.push_back(std::move(op));
  }
  return {n, std::move(ops)};
}

FrameSpecFile parse_frame_spec(const json& j) {
  if (!j.is_object()) parse_fail("$", "expected an object");
  FrameSpecFile spec{system_from_json(member(j, "system", "$"), "system")};
  const std::size_t n = spec.system.ambient_dim();

  auto square = [&](const char* key, std::optional<ComplexMatrix>& slot) {
    if (const auto it = j.find(key); it != j.end()) {
      slot = matrix_from_json(*it, key);
      require_square(*slot, n, key);
    }
  };
  square("K", spec.k);
  square("U", spec.u);
  square("V", spec.v);
  square("U1", spec.u1);
  square("U2", spec.u2);
  square("K1", spec.k1);
  square("K2", spec.k2);

  if (const auto it = j.find("second_system"); it != j.end()) {
    spec.second_system = system_from_json(*it, "second_system");
    if (!spec.second_system->same_structure(spec.system))
      throw Error(ErrorKind::DimensionMismatch, "second_system: block structure differs from system");
  }
  if (const auto it = j.find("alpha"); it != j.end()) spec.alpha = complex_from_json(*it, "alpha");
  if (const auto it = j.find("beta"); it != j.end()) spec.beta = complex_from_json(*it, "beta");
  if (const auto it = j.find("n_power"); it != j.end()) {
    const std::size_t p = count_from_json(*it, "n_power");
    if (p < 1 || p > 64) throw Error(ErrorKind::InvalidArgument, "n_power: must lie in [1, 64]");
    spec.n_power = static_cast<int>(p);
  }
  return spec;
}

FrameSpecFile parse_frame_spec_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
  }
  return parse_frame_spec(j);
}

json frame_spec_to_json(const FrameSpecFile& spec) {
  json j{{"system", system_to_json(spec.system)}};
  auto put = [&](const char* key, const std::optional<ComplexMatrix>& m) {
    if (m) j[key] = matrix_to_json(*m);
  };
  put("K", spec.k);
  if (spec.second_system) j["second_system"] = system_to_json(*spec.second_system);
  put("U", spec.u);
  put("V", spec.v);
  put("U1", spec.u1);
  put("U2", spec.u2);
  put("K1", spec.k1);
  put("K2", spec.k2);
  if (spec.alpha) j["alpha"] = complex_to_json(*spec.alpha);
  if (spec.beta) j["beta"] = complex_to_json(*spec.beta);
  if (spec.n_power) j["n_power"] = *spec.n_power;
  return j;
}

json bounds_to_json(const FrameBounds& b) {
  json j{{"lower", b.lower},
         {"upper", b.upper},
         {"bessel", b.is_bessel},
         {"g_frame", b.is_g_frame},
         {"k_g_frame", b.is_k_g_frame},
         {"parseval", b.is_parseval}};
  j["tightness"] = b.tightness ? json(*b.tightness) : json(nullptr);
  return j;
}

json combined_bound_to_json(const CombinedBound& b) {
  json j{{"predicted_lower", b.predicted_lower},
         {"predicted_upper", b.predicted_upper},
         {"measured_lower", b.measured_lower},
         {"measured_upper", b.measured_upper},
         {"holds", b.holds},
         {"degenerate", b.degenerate}};
  if (b.unfactored_lower) j["unfactored_lower"] = *b.unfactored_lower;
  return j;
}

json coefficients_to_json(const CoefficientVector& c) {
  json blocks = json::array();
  for (const auto& b : c.blocks()) blocks.push_back(vector_to_json(b));
  return blocks;
}

}  // namespace kgframe
