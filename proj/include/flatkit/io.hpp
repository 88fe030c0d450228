#pragma once

// JSON surface files.
//
//   {"field": {"d": <int|null>},
//    "polygons": [{"vertices": [[[an,ad,bn,bd],[an,ad,bn,bd]], ...]}, ...],
//    "gluings": [[[p,e],[p2,e2]], ...]}
//
// A scalar is four integers a_num, a_den, b_num, b_den meaning
// a_num/a_den + (b_num/b_den)*sqrt(d). Integers beyond 64 bits are written
// as decimal strings.

#include <nlohmann/json.hpp>
#include <string>

#include "flatkit/surface.hpp"

namespace flatkit {

using Json = nlohmann::ordered_json;

Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j, long d);

Json spec_to_json(const SurfaceSpec& spec);
SurfaceSpec spec_from_json(const Json& j);

/// Pretty-printed JSON text for a surface spec (stable formatting).
std::string spec_to_text(const SurfaceSpec& spec);
SurfaceSpec spec_from_text(const std::string& text);

SurfaceSpec read_spec_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace flatkit
