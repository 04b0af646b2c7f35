#include "tana/spaces/building_graph.hpp"

#include <algorithm>
#include <sstream>

#include "tana/error.hpp"

namespace tana::spaces {
namespace {

bool overlaps(const RoomBox& a, const RoomBox& b) {
  return a.min.x < b.max.x && b.min.x < a.max.x && a.min.y < b.max.y && b.min.y < a.max.y &&
         a.min.z < b.max.z && b.min.z < a.max.z;
}

std::string describe(const Vec3& p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ", " << p.z << ")";
  return os.str();
}

}  // namespace

BuildingGraph::BuildingGraph(std::vector<RoomBox> rooms,
                             std::vector<std::pair<std::string, std::string>> adjacency)
    : rooms_(std::move(rooms)), adjacency_(std::move(adjacency)) {
  for (std::size_t i = 0; i < rooms_.size(); ++i) {
    const auto& room = rooms_[i];
    if (room.id.empty()) throw Error(ErrorCode::InvalidFloorplan, "room id must not be empty");
    if (!(room.min.x < room.max.x && room.min.y < room.max.y && room.min.z < room.max.z)) {
      throw Error(ErrorCode::InvalidFloorplan, "room '" + room.id + "' has an empty box");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (rooms_[j].id == room.id) throw Error(ErrorCode::InvalidFloorplan, "duplicate room '" + room.id + "'");
      if (overlaps(rooms_[j], room)) {
        throw Error(ErrorCode::InvalidFloorplan, "rooms '" + rooms_[j].id + "' and '" + room.id + "' overlap");
      }
    }
  }
  for (const auto& [a, b] : adjacency_) {
    if (!find_room(a) || !find_room(b)) {
      throw Error(ErrorCode::InvalidFloorplan, "adjacency [" + a + ", " + b + "] names an unknown room");
    }
  }
}

const RoomBox* BuildingGraph::find_room(const std::string& id) const {
  auto it = std::find_if(rooms_.begin(), rooms_.end(), [&](const RoomBox& r) { return r.id == id; });
  return it == rooms_.end() ? nullptr : &*it;
}

std::vector<std::string> BuildingGraph::neighbours(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& [a, b] : adjacency_) {
    if (a == id) out.push_back(b);
    else if (b == id) out.push_back(a);
  }
  return out;
}

BoundingBox BuildingGraph::bounds() const {
  if (rooms_.empty()) return {};
  BoundingBox box{rooms_.front().min, rooms_.front().max};
  for (const auto& room : rooms_) {
    box.min = {std::min(box.min.x, room.min.x), std::min(box.min.y, room.min.y), std::min(box.min.z, room.min.z)};
    box.max = {std::max(box.max.x, room.max.x), std::max(box.max.y, room.max.y), std::max(box.max.z, room.max.z)};
  }
  return box;
}

bool BuildingGraph::inside_bounds(const Vec3& p) const {
  if (rooms_.empty()) return false;
  const auto box = bounds();
  return p.x >= box.min.x && p.x <= box.max.x && p.y >= box.min.y && p.y <= box.max.y && p.z >= box.min.z &&
         p.z <= box.max.z;
}

GraphNode cartesian_to_room(const Vec3& point, const BuildingGraph& floorplan) {
  if (floorplan.empty()) throw Error(ErrorCode::InvalidFloorplan, "floorplan has no rooms");
  for (const auto& room : floorplan.rooms()) {
    if (room.contains(point)) return GraphNode{room.id};
  }
  throw Error(ErrorCode::OutsideFloorplan, "point " + describe(point) + " is in no room");
}

}  // namespace tana::spaces
