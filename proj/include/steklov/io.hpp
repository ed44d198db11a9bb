#pragma once

// JSON and CSV formats for boundary data, DN maps, meshes and reports.
// Malformed content raises Schema, unreadable files raise Io.

#include <steklov/flattening.hpp>
#include <steklov/holomorphic.hpp>
#include <steklov/topology.hpp>

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace steklov {

/// Keys keep insertion order so that equal inputs dump to equal bytes.
using Json = nlohmann::ordered_json;

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
/// Two-space indentation, shortest round-trip doubles, trailing newline.
std::string dump_json(const Json& json);
void write_json_file(const std::string& path, const Json& json);

Json to_json(const BoundaryGeometry& geometry);
BoundaryGeometry geometry_from_json(const Json& json);

/// {"re": [...], "im": [...]} in stacked sample order.
Json values_to_json(const BoundaryFunction& f);
BoundaryFunction function_from_json(const BoundaryGeometry& geometry, const Json& json);

/// Matrix rows are arrays of reals when every entry is real and of [re, im]
/// pairs otherwise.
Json to_json(const BoundaryOperator& op);
BoundaryOperator operator_from_json(const Json& json);

/// Operator fields plus provenance and diagnostics. Diagnostics are
/// recomputed on reading.
Json to_json(const DNMap& dn);
DNMap dn_from_json(const Json& json);

Json to_json(const PlanarMesh& mesh);
/// Runs validate_mesh on the result.
PlanarMesh mesh_from_json(const Json& json);

Json to_json(const TopologyReport& report);
Json to_json(const HoloTraceResult& result);
Json to_json(const FlattenResult& result);

/// Columns circle_index, k, s, value_re, value_im; one row per sample.
void write_boundary_function_csv(std::ostream& out, const BoundaryFunction& f);
/// Rows must list every sample of `geometry` in order with matching s.
BoundaryFunction read_boundary_function_csv(std::istream& in, const BoundaryGeometry& geometry);

/// Columns vertex_index, lambda.
void write_conformal_factor_csv(std::ostream& out, const ConformalFactor& lambda);
ConformalFactor read_conformal_factor_csv(std::istream& in, const PlanarMesh& mesh);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

} // namespace steklov
