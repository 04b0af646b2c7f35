#include "tana/spaces/types.hpp"

#include <type_traits>

namespace tana::spaces {

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::PhysicalCartesian: return "physical-cartesian";
    case SpaceKind::BuildingGraph: return "building-graph";
    case SpaceKind::BodyWorn: return "body-worn";
    case SpaceKind::Temporal: return "temporal";
    case SpaceKind::Value: return "value";
  }
  return "value";
}

std::optional<SpaceKind> space_kind_from_string(std::string_view text) {
  for (auto kind : {SpaceKind::PhysicalCartesian, SpaceKind::BuildingGraph, SpaceKind::BodyWorn,
                    SpaceKind::Temporal, SpaceKind::Value}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

SpaceKind required_space_kind(const Position& position) {
  return std::visit(
      [](const auto& where) {
        using T = std::decay_t<decltype(where)>;
        if constexpr (std::is_same_v<T, Cartesian3>) return SpaceKind::PhysicalCartesian;
        else if constexpr (std::is_same_v<T, GraphNode>) return SpaceKind::BuildingGraph;
        else return SpaceKind::BodyWorn;
      },
      position.where);
}

std::string_view to_string(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::Acceleration: return "acceleration";
    case PayloadKind::Sound: return "sound";
    case PayloadKind::Temperature: return "temperature";
    case PayloadKind::Color: return "color";
  }
  return "acceleration";
}

std::optional<PayloadKind> payload_kind_from_string(std::string_view text) {
  for (auto kind : {PayloadKind::Acceleration, PayloadKind::Sound, PayloadKind::Temperature,
                    PayloadKind::Color}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

PayloadKind payload_kind(const Payload& payload) {
  return std::visit(
      [](const auto& value) {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, Accel3>) return PayloadKind::Acceleration;
        else if constexpr (std::is_same_v<T, SoundFrame>) return PayloadKind::Sound;
        else if constexpr (std::is_same_v<T, Temperature>) return PayloadKind::Temperature;
        else return PayloadKind::Color;
      },
      payload.value);
}

std::vector<double> payload_components(const Payload& payload) {
  return std::visit(
      [](const auto& value) -> std::vector<double> {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, Accel3>) {
          return {value.ax, value.ay, value.az};
        } else if constexpr (std::is_same_v<T, SoundFrame>) {
          std::vector<double> out = value.offsets_us;
          out.push_back(value.loudness_db);
          return out;
        } else if constexpr (std::is_same_v<T, Temperature>) {
          return {value.degrees};
        } else {
          return {value.r, value.g, value.b};
        }
      },
      payload.value);
}

}  // namespace tana::spaces
