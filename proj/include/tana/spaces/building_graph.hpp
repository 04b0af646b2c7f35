#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tana/spaces/types.hpp"

namespace tana::spaces {

/// Axis-aligned room volume, half-open on every axis: [min, max).
struct RoomBox {
  std::string id;
  Vec3 min;
  Vec3 max;

  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x < max.x && p.y >= min.y && p.y < max.y && p.z >= min.z && p.z < max.z;
  }
  friend bool operator==(const RoomBox&, const RoomBox&) = default;
};

struct BoundingBox {
  Vec3 min;
  Vec3 max;
};

class BuildingGraph {
 public:
  BuildingGraph() = default;

  /// Throws InvalidFloorplan on empty/inverted boxes, duplicate ids, overlapping rooms or
  /// adjacency edges naming unknown rooms.
  BuildingGraph(std::vector<RoomBox> rooms, std::vector<std::pair<std::string, std::string>> adjacency);

  const std::vector<RoomBox>& rooms() const { return rooms_; }
  const std::vector<std::pair<std::string, std::string>>& adjacency() const { return adjacency_; }
  bool empty() const { return rooms_.empty(); }

  const RoomBox* find_room(const std::string& id) const;
  std::vector<std::string> neighbours(const std::string& id) const;

  /// Closed hull of all rooms.
  BoundingBox bounds() const;
  bool inside_bounds(const Vec3& p) const;

 private:
  std::vector<RoomBox> rooms_;
  std::vector<std::pair<std::string, std::string>> adjacency_;
};

/// Room whose half-open box contains the point. Throws OutsideFloorplan.
GraphNode cartesian_to_room(const Vec3& point, const BuildingGraph& floorplan);

}  // namespace tana::spaces
