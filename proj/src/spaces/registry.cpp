#include "tana/spaces/registry.hpp"

#include <algorithm>
#include <deque>

#include "tana/error.hpp"

namespace tana::spaces {
namespace {

int required_dimensionality(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Temporal: return 1;
    case SpaceKind::PhysicalCartesian: return 3;
    case SpaceKind::BuildingGraph: return 1;
    default: return 0;  // free
  }
}

const std::string& space_of(const SpaceValue& value) {
  return std::visit([](const auto& v) -> const std::string& { return v.space_id; }, value);
}

}  // namespace

void SpaceRegistry::require_unfrozen() const {
  if (frozen_) throw Error(ErrorCode::RegistryFrozen, "registry is frozen");
}

void SpaceRegistry::register_space(const SpaceDescriptor& descriptor) {
  require_unfrozen();
  if (descriptor.space_id.empty()) throw Error(ErrorCode::InvalidDescriptor, "space_id");
  if (has_space(descriptor.space_id)) throw Error(ErrorCode::DuplicateSpaceId, descriptor.space_id);
  if (descriptor.dimensionality < 1) throw Error(ErrorCode::InvalidDescriptor, "dimensionality");
  if (int want = required_dimensionality(descriptor.kind); want != 0 && descriptor.dimensionality != want) {
    throw Error(ErrorCode::InvalidDescriptor, "dimensionality");
  }
  spaces_.push_back(descriptor);
}

void SpaceRegistry::register_space(const SpaceDescriptor& descriptor, BuildingGraph floorplan) {
  if (descriptor.kind != SpaceKind::BuildingGraph) {
    throw Error(ErrorCode::InvalidDescriptor, "floorplan attached to non-graph space " + descriptor.space_id);
  }
  register_space(descriptor);
  floorplans_.emplace(descriptor.space_id, std::move(floorplan));
}

void SpaceRegistry::register_mapping(const MappingFunction& mapping, Transform forward, Transform inverse) {
  require_unfrozen();
  if (!has_space(mapping.from_space_id)) throw Error(ErrorCode::UnknownSpace, mapping.from_space_id);
  if (!has_space(mapping.to_space_id)) throw Error(ErrorCode::UnknownSpace, mapping.to_space_id);
  if (mapping.from_space_id == mapping.to_space_id) {
    throw Error(ErrorCode::InvalidMapping, mapping.mapping_id + ": from and to are the same space");
  }
  if (transforms_.count(mapping.mapping_id)) throw Error(ErrorCode::DuplicateMappingId, mapping.mapping_id);
  if (!forward) throw Error(ErrorCode::InvalidMapping, mapping.mapping_id + ": missing transform");
  if (mapping.invertible && !inverse) {
    throw Error(ErrorCode::InvalidMapping, mapping.mapping_id + ": invertible mapping without inverse");
  }

  auto& stored = transforms_[mapping.mapping_id];
  stored = {std::move(forward), mapping.invertible ? std::move(inverse) : Transform{}};
  mappings_.push_back(mapping);

  edges_.push_back({{mapping.mapping_id, mapping.from_space_id, mapping.to_space_id, false}, mapping.total});
  if (mapping.invertible) {
    edges_.push_back({{mapping.mapping_id, mapping.to_space_id, mapping.from_space_id, true}, mapping.total});
  }
}

void SpaceRegistry::register_view(const SubjectiveView& view) {
  require_unfrozen();
  if (view.view_id.empty()) throw Error(ErrorCode::InvalidDescriptor, "view_id");
  if (views_.count(view.view_id)) throw Error(ErrorCode::InvalidDescriptor, "duplicate view " + view.view_id);
  if (!has_space(view.physical_space_id)) throw Error(ErrorCode::UnknownSpace, view.physical_space_id);
  for (const auto& [kind, space_id] : view.value_spaces) {
    if (!has_space(space_id)) throw Error(ErrorCode::UnknownSpace, space_id);
  }
  views_.emplace(view.view_id, view);
  view_order_.push_back(view.view_id);
}

const SpaceDescriptor& SpaceRegistry::space(const std::string& space_id) const {
  auto it = std::find_if(spaces_.begin(), spaces_.end(), [&](const auto& s) { return s.space_id == space_id; });
  if (it == spaces_.end()) throw Error(ErrorCode::UnknownSpace, space_id);
  return *it;
}

bool SpaceRegistry::has_space(const std::string& space_id) const {
  return std::any_of(spaces_.begin(), spaces_.end(), [&](const auto& s) { return s.space_id == space_id; });
}

const BuildingGraph* SpaceRegistry::floorplan(const std::string& space_id) const {
  auto it = floorplans_.find(space_id);
  return it == floorplans_.end() ? nullptr : &it->second;
}

const SubjectiveView& SpaceRegistry::view(const std::string& view_id) const {
  auto it = views_.find(view_id);
  if (it == views_.end()) throw Error(ErrorCode::UnknownView, view_id);
  return it->second;
}

bool SpaceRegistry::has_view(const std::string& view_id) const { return views_.count(view_id) > 0; }

std::vector<std::string> SpaceRegistry::view_ids() const { return view_order_; }

std::vector<MappingStep> SpaceRegistry::resolve_mapping_path(const std::string& from_space_id,
                                                             const std::string& to_space_id) const {
  if (!has_space(from_space_id)) throw Error(ErrorCode::UnknownSpace, from_space_id);
  if (!has_space(to_space_id)) throw Error(ErrorCode::UnknownSpace, to_space_id);
  if (from_space_id == to_space_id) return {};

  // Breadth-first over edges in registration order: the first time a space is reached is
  // via the fewest hops, and among equal-length routes via the earliest edges.
  std::map<std::string, std::size_t> reached_by;  // space -> edge index
  std::deque<std::string> frontier{from_space_id};
  std::map<std::string, bool> seen{{from_space_id, true}};
  while (!frontier.empty()) {
    const std::string here = frontier.front();
    frontier.pop_front();
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& step = edges_[i].step;
      if (step.from_space_id != here || seen.count(step.to_space_id)) continue;
      seen[step.to_space_id] = true;
      reached_by[step.to_space_id] = i;
      if (step.to_space_id == to_space_id) {
        std::vector<MappingStep> path;
        for (std::string at = to_space_id; at != from_space_id;) {
          const auto& edge = edges_[reached_by.at(at)];
          path.push_back(edge.step);
          at = edge.step.from_space_id;
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      frontier.push_back(step.to_space_id);
    }
  }
  throw Error(ErrorCode::NoPath, from_space_id + " -> " + to_space_id);
}

SpaceValue SpaceRegistry::apply_path(const SpaceValue& value, const std::vector<MappingStep>& path) const {
  SpaceValue current = value;
  for (const auto& step : path) {
    auto it = std::find_if(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.step == step; });
    if (it == edges_.end()) throw Error(ErrorCode::NoPath, "unknown mapping step " + step.mapping_id);
    if (space_of(current) != step.from_space_id) {
      throw Error(ErrorCode::InvalidMapping,
                  step.mapping_id + " expects " + step.from_space_id + ", got " + space_of(current));
    }
    try {
      const auto& pair = transforms_.at(step.mapping_id);
      current = step.inverse ? pair.second(current) : pair.first(current);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::PartialMappingUndefined || it->total) throw;
      throw Error(ErrorCode::PartialMappingUndefined, step.mapping_id + ": " + e.detail());
    }
  }
  return current;
}

NormalizedSample apply_view(const NormalizedSample& sample, const SubjectiveView& view,
                            const SpaceRegistry& registry) {
  if (!registry.has_space(sample.position.space_id)) throw Error(ErrorCode::UnknownSpace, sample.position.space_id);
  if (!registry.has_space(sample.payload.space_id)) throw Error(ErrorCode::UnknownSpace, sample.payload.space_id);

  NormalizedSample out = sample;
  out.provenance.reset();

  if (sample.position.space_id != view.physical_space_id) {
    std::vector<MappingStep> path;
    bool pass_through = false;
    try {
      path = registry.resolve_mapping_path(sample.position.space_id, view.physical_space_id);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPath || !std::holds_alternative<BodyWorn>(sample.position.where)) throw;
      pass_through = true;
    }
    if (!pass_through) out.position = std::get<Position>(registry.apply_path(sample.position, path));
  }

  auto preferred = view.value_spaces.find(payload_kind(sample.payload));
  if (preferred != view.value_spaces.end() && preferred->second != sample.payload.space_id) {
    const auto path = registry.resolve_mapping_path(sample.payload.space_id, preferred->second);
    out.payload = std::get<Payload>(registry.apply_path(sample.payload, path));
  }
  return out;
}

}  // namespace tana::spaces
