#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tana/spaces/building_graph.hpp"
#include "tana/spaces/types.hpp"

namespace tana::spaces {

/// Anything a mapping function can carry between spaces.
using SpaceValue = std::variant<Position, Payload>;
using Transform = std::function<SpaceValue(const SpaceValue&)>;

struct MappingFunction {
  std::string mapping_id;
  std::string from_space_id;
  std::string to_space_id;
  bool invertible = false;
  // Partial mappings may raise PartialMappingUndefined for inputs outside their domain.
  bool total = true;
};

struct MappingStep {
  std::string mapping_id;
  std::string from_space_id;
  std::string to_space_id;
  bool inverse = false;

  friend bool operator==(const MappingStep&, const MappingStep&) = default;
};

struct SubjectiveView {
  std::string view_id;
  std::string physical_space_id;
  std::map<PayloadKind, std::string> value_spaces;
};

/// Spaces, mappings and views. Populated during setup, then frozen; after `freeze()` every
/// member is read-only and safe to share between threads.
class SpaceRegistry {
 public:
  void register_space(const SpaceDescriptor& descriptor);
  void register_space(const SpaceDescriptor& descriptor, BuildingGraph floorplan);

  /// `inverse` is required when `mapping.invertible` is set; the reverse direction then
  /// resolves as its own edge.
  void register_mapping(const MappingFunction& mapping, Transform forward, Transform inverse = {});

  void register_view(const SubjectiveView& view);

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  /// Registration order.
  const std::vector<SpaceDescriptor>& spaces() const { return spaces_; }
  const SpaceDescriptor& space(const std::string& space_id) const;
  bool has_space(const std::string& space_id) const;
  const BuildingGraph* floorplan(const std::string& space_id) const;

  const std::vector<MappingFunction>& mappings() const { return mappings_; }
  const SubjectiveView& view(const std::string& view_id) const;
  bool has_view(const std::string& view_id) const;
  std::vector<std::string> view_ids() const;

  /// Fewest-hop path; ties go to the earliest-registered edges. Empty when from == to.
  std::vector<MappingStep> resolve_mapping_path(const std::string& from_space_id,
                                                const std::string& to_space_id) const;

  SpaceValue apply_path(const SpaceValue& value, const std::vector<MappingStep>& path) const;

 private:
  struct Edge {
    MappingStep step;
    bool total;
  };

  void require_unfrozen() const;

  bool frozen_ = false;
  std::vector<SpaceDescriptor> spaces_;
  std::map<std::string, BuildingGraph> floorplans_;
  std::vector<MappingFunction> mappings_;
  // mapping_id -> (forward, inverse)
  std::map<std::string, std::pair<Transform, Transform>> transforms_;
  std::vector<Edge> edges_;
  std::map<std::string, SubjectiveView> views_;
  std::vector<std::string> view_order_;
};

/// Maps position and payload into the view's preferred spaces and strips provenance.
/// Body-worn positions with no route to the preferred physical space pass through.
NormalizedSample apply_view(const NormalizedSample& sample, const SubjectiveView& view,
                            const SpaceRegistry& registry);

}  // namespace tana::spaces
