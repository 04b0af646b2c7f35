#include "tana/spaces/wire.hpp"

#include <type_traits>

namespace tana::spaces {

nlohmann::ordered_json to_wire(const NormalizedSample& sample) {
  nlohmann::ordered_json position;
  position["space"] = sample.position.space_id;
  std::visit(
      [&](const auto& where) {
        using T = std::decay_t<decltype(where)>;
        if constexpr (std::is_same_v<T, Cartesian3>) {
          position["coords"] = {where.point.x, where.point.y, where.point.z};
        } else if constexpr (std::is_same_v<T, GraphNode>) {
          position["room"] = where.room_id;
        } else {
          position["entity"] = where.entity_id;
          position["attachment"] = where.attachment;
        }
      },
      sample.position.where);

  nlohmann::ordered_json payload;
  payload["space"] = sample.payload.space_id;
  payload["values"] = payload_components(sample.payload);

  nlohmann::ordered_json out;
  out["t_s"] = sample.time.t_s;
  out["position"] = std::move(position);
  out["payload"] = std::move(payload);
  return out;
}

std::string to_wire_line(const NormalizedSample& sample) { return to_wire(sample).dump(); }

nlohmann::ordered_json to_json(const SpaceDescriptor& descriptor) {
  nlohmann::ordered_json out;
  out["space_id"] = descriptor.space_id;
  out["kind"] = to_string(descriptor.kind);
  out["unit"] = descriptor.unit;
  out["dimensionality"] = descriptor.dimensionality;
  return out;
}

}  // namespace tana::spaces
