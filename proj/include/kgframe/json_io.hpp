#pragma once

// JSON encoding of matrices, systems and frame-spec files.
//
//   complex  {"re": x, "im": y}      (a bare number is accepted as real on input)
//   matrix   [[z00, z01, ...], [z10, ...], ...]   row-major; [] is 0 x 0
//   system   {"ambient_dim": n, "blocks": [{"dim": m, "matrix": <m x n>}, ...]}
//
// Parse failures throw Error(ParseError) with a path such as
// "system.blocks[2].matrix[0][1].re"; shape failures throw DimensionMismatch
// naming the field.

#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "kgframe/atomic.hpp"
#include "kgframe/gframe.hpp"

namespace kgframe {

using json = nlohmann::json;

json complex_to_json(cplx z);
json matrix_to_json(const ComplexMatrix& m);
json vector_to_json(std::span<const cplx> v);
json system_to_json(const GFrameSystem& sys);

cplx complex_from_json(const json& j, const std::string& path);
ComplexMatrix matrix_from_json(const json& j, const std::string& path);
CVector vector_from_json(const json& j, const std::string& path);
GFrameSystem system_from_json(const json& j, const std::string& path);

struct FrameSpecFile {
  explicit FrameSpecFile(GFrameSystem sys) : system(std::move(sys)) {}

  GFrameSystem system;
  std::optional<ComplexMatrix> k;
  std::optional<GFrameSystem> second_system;
  std::optional<ComplexMatrix> u;
  std::optional<ComplexMatrix> v;
  std::optional<ComplexMatrix> u1;
  std::optional<ComplexMatrix> u2;
  std::optional<ComplexMatrix> k1;
  std::optional<ComplexMatrix> k2;
  std::optional<cplx> alpha;
  std::optional<cplx> beta;
  std::optional<int> n_power;

  friend bool operator==(const FrameSpecFile&, const FrameSpecFile&) = default;
};

FrameSpecFile parse_frame_spec(const json& j);
// Throws ParseError on malformed JSON text.
FrameSpecFile parse_frame_spec_text(const std::string& text);
json frame_spec_to_json(const FrameSpecFile& spec);

json bounds_to_json(const FrameBounds& b);
json combined_bound_to_json(const CombinedBound& b);
json coefficients_to_json(const CoefficientVector& c);

}  // namespace kgframe
