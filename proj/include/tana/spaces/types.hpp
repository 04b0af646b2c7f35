#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tana::spaces {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

enum class SpaceKind {
  PhysicalCartesian,
  BuildingGraph,
  // Frame attached to a wearer. Positions here are relative to an entity, not a place.
  BodyWorn,
  Temporal,
  Value,
};

std::string_view to_string(SpaceKind kind);
std::optional<SpaceKind> space_kind_from_string(std::string_view text);

struct SpaceDescriptor {
  std::string space_id;
  SpaceKind kind = SpaceKind::Value;
  std::string unit;
  int dimensionality = 1;

  friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;
};

// ---- positions -------------------------------------------------------------

struct Cartesian3 {
  Vec3 point;
  friend bool operator==(const Cartesian3&, const Cartesian3&) = default;
};

struct GraphNode {
  std::string room_id;
  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct BodyWorn {
  std::string entity_id;
  std::string attachment;
  friend bool operator==(const BodyWorn&, const BodyWorn&) = default;
};

struct Position {
  std::variant<Cartesian3, GraphNode, BodyWorn> where;
  std::string space_id;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Space kind a position variant must inhabit.
SpaceKind required_space_kind(const Position& position);

// ---- payloads --------------------------------------------------------------

struct Accel3 {
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;

  double magnitude() const { return std::sqrt(ax * ax + ay * ay + az * az); }
  friend bool operator==(const Accel3&, const Accel3&) = default;
};

/// Arrival offsets per microphone, relative to microphone 0, plus frame loudness.
struct SoundFrame {
  std::vector<double> offsets_us;
  double loudness_db = 0.0;
  friend bool operator==(const SoundFrame&, const SoundFrame&) = default;
};

struct Temperature {
  double degrees = 0.0;
  friend bool operator==(const Temperature&, const Temperature&) = default;
};

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Payload {
  std::variant<Accel3, SoundFrame, Temperature, Rgb> value;
  std::string space_id;

  friend bool operator==(const Payload&, const Payload&) = default;
};

/// Physical quantity carried by a payload; subjective views and stream filters key on it.
enum class PayloadKind { Acceleration, Sound, Temperature, Color };

std::string_view to_string(PayloadKind kind);
std::optional<PayloadKind> payload_kind_from_string(std::string_view text);
PayloadKind payload_kind(const Payload& payload);

/// Flattened component list, in the order the wire form uses.
std::vector<double> payload_components(const Payload& payload);

// ---- samples ---------------------------------------------------------------

struct TemporalCoordinate {
  double t_s = 0.0;
  std::string space_id;
  friend bool operator==(const TemporalCoordinate&, const TemporalCoordinate&) = default;
};

struct Provenance {
  std::string sensor_id;
  std::uint64_t sequence_no = 0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct NormalizedSample {
  Position position;
  Payload payload;
  TemporalCoordinate time;
  // Debug-only envelope; stripped at every view boundary and never serialized.
  std::optional<Provenance> provenance;

  friend bool operator==(const NormalizedSample&, const NormalizedSample&) = default;
};

}  // namespace tana::spaces
