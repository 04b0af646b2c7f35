#include "tana/spaces/standard.hpp"

#include <cmath>

#include "tana/error.hpp"

namespace tana::spaces {
namespace {

Transform temperature_transform(double (*fn)(double), std::string to_space) {
  return [fn, to_space = std::move(to_space)](const SpaceValue& in) -> SpaceValue {
    const auto& payload = std::get<Payload>(in);
    const auto* t = std::get_if<Temperature>(&payload.value);
    if (!t) throw Error(ErrorCode::WrongPayloadSpace, "temperature mapping applied to non-temperature payload");
    return Payload{Temperature{fn(t->degrees)}, to_space};
  };
}

}  // namespace

double celsius_to_fahrenheit(double degrees_c) {
  if (!std::isfinite(degrees_c)) throw Error(ErrorCode::NonFiniteInput, "celsius value is not finite");
  return degrees_c * 9.0 / 5.0 + 32.0;
}

double fahrenheit_to_celsius(double degrees_f) {
  if (!std::isfinite(degrees_f)) throw Error(ErrorCode::NonFiniteInput, "fahrenheit value is not finite");
  return (degrees_f - 32.0) * 5.0 / 9.0;
}

void register_celsius_fahrenheit(SpaceRegistry& registry) {
  registry.register_mapping({"celsius-fahrenheit", kCelsius, kFahrenheit, true, true},
                            temperature_transform(&celsius_to_fahrenheit, kFahrenheit),
                            temperature_transform(&fahrenheit_to_celsius, kCelsius));
}

void register_cartesian_to_graph(SpaceRegistry& registry, const BuildingGraph& floorplan) {
  registry.register_mapping(
      {"cartesian-room", kRoomCartesian, kBuildingGraph, false, false},
      [floorplan](const SpaceValue& in) -> SpaceValue {
        const auto& position = std::get<Position>(in);
        const auto* c = std::get_if<Cartesian3>(&position.where);
        if (!c) throw Error(ErrorCode::InvalidMapping, "room lookup needs a cartesian position");
        try {
          return Position{cartesian_to_room(c->point, floorplan), kBuildingGraph};
        } catch (const Error& e) {
          throw Error(ErrorCode::PartialMappingUndefined, e.detail());
        }
      });
}

SpaceRegistry make_standard_registry(const BuildingGraph& floorplan, int microphones) {
  SpaceRegistry registry;
  registry.register_space({kTimeSeconds, SpaceKind::Temporal, "s", 1});
  registry.register_space({kRoomCartesian, SpaceKind::PhysicalCartesian, "m", 3});
  registry.register_space({kBuildingGraph, SpaceKind::BuildingGraph, "room", 1}, floorplan);
  registry.register_space({kBodyFrame, SpaceKind::BodyWorn, "entity", 2});
  registry.register_space({kAccelG, SpaceKind::Value, "g", 3});
  registry.register_space({kTdoaFrame, SpaceKind::Value, "us+dB", microphones > 0 ? microphones + 1 : 1});
  registry.register_space({kCelsius, SpaceKind::Value, "celsius", 1});
  registry.register_space({kFahrenheit, SpaceKind::Value, "fahrenheit", 1});
  registry.register_space({kRgb, SpaceKind::Value, "rgb", 3});

  register_celsius_fahrenheit(registry);
  register_cartesian_to_graph(registry, floorplan);

  // No value preference keeps every payload in the space its sensor reports in.
  const std::map<PayloadKind, std::string> native_values;
  const std::map<PayloadKind, std::string> fahrenheit_values{{PayloadKind::Temperature, kFahrenheit}};

  registry.register_view({kNativeView, kRoomCartesian, native_values});
  registry.register_view({kFahrenheitView, kRoomCartesian, fahrenheit_values});
  registry.register_view({kGraphView, kBuildingGraph, native_values});
  return registry;
}

}  // namespace tana::spaces
