#pragma once

#include <string>

#include "tana/spaces/building_graph.hpp"
#include "tana/spaces/registry.hpp"

namespace tana::spaces {

// Well-known space ids.
inline constexpr const char* kTimeSeconds = "time-s";
inline constexpr const char* kRoomCartesian = "room-cartesian";
inline constexpr const char* kBuildingGraph = "building-graph";
inline constexpr const char* kBodyFrame = "body-frame";
inline constexpr const char* kAccelG = "accel-g";
inline constexpr const char* kTdoaFrame = "tdoa-frame";
inline constexpr const char* kCelsius = "celsius";
inline constexpr const char* kFahrenheit = "fahrenheit";
inline constexpr const char* kRgb = "rgb";

// Well-known view ids.
inline constexpr const char* kNativeView = "native";
inline constexpr const char* kFahrenheitView = "fahrenheit";
inline constexpr const char* kGraphView = "graph";

/// degrees_c * 9/5 + 32. Throws NonFiniteInput.
double celsius_to_fahrenheit(double degrees_c);
/// (degrees_f - 32) * 5/9. Throws NonFiniteInput.
double fahrenheit_to_celsius(double degrees_f);

void register_celsius_fahrenheit(SpaceRegistry& registry);
/// Partial, non-invertible: undefined outside every room.
void register_cartesian_to_graph(SpaceRegistry& registry, const BuildingGraph& floorplan);

/// The nine standard spaces, the two standard mappings and the three standard views
/// (native, fahrenheit, graph). Not frozen, so callers can add scenario views.
/// `microphones` sizes the tdoa-frame space (offsets per mic + loudness).
SpaceRegistry make_standard_registry(const BuildingGraph& floorplan, int microphones);

}  // namespace tana::spaces
