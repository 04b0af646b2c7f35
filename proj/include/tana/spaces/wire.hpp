#pragma once

#include <string>

#include "json.hpp"
#include "tana/spaces/types.hpp"

namespace tana::spaces {

/// {"t_s", "position": {"space", "coords" | "room" | "entity"+"attachment"}, "payload": {"space", "values"}}
/// in that key order. Provenance is never written.
nlohmann::ordered_json to_wire(const NormalizedSample& sample);
/// One JSONL line, without the trailing newline.
std::string to_wire_line(const NormalizedSample& sample);

nlohmann::ordered_json to_json(const SpaceDescriptor& descriptor);

}  // namespace tana::spaces
