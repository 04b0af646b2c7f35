#include "tana/fall/pipeline.hpp"

#include <algorithm>
#include <map>

#include "tana/error.hpp"

namespace tana::fall {

PipelineResult run_fall_pipeline(const std::vector<spaces::NormalizedSample>& samples, const PipelineConfig& config) {
  std::map<std::string, std::vector<spaces::NormalizedSample>> accel_by_entity;
  std::vector<spaces::NormalizedSample> frames;
  for (const auto& s : samples) {
    switch (spaces::payload_kind(s.payload)) {
      case spaces::PayloadKind::Acceleration: {
        const auto* body = std::get_if<spaces::BodyWorn>(&s.position.where);
        accel_by_entity[body ? body->entity_id : std::string()].push_back(s);
        break;
      }
      case spaces::PayloadKind::Sound: frames.push_back(s); break;
      default: break;
    }
  }

  PipelineResult result;
  for (const auto& [entity, stream] : accel_by_entity) {
    auto impacts = detect_impacts(stream, config.params);
    result.impacts.insert(result.impacts.end(), impacts.begin(), impacts.end());
  }
  std::stable_sort(result.impacts.begin(), result.impacts.end(),
                   [](const ImpactEvent& a, const ImpactEvent& b) { return a.t_s < b.t_s; });

  result.sounds = detect_sound_events(frames, config.params);
  for (auto& sound : result.sounds) {
    const auto estimate = estimate_source_height(config.mic_positions, sound.offsets_us, config.speed_of_sound_mps,
                                                 config.search_volume, config.params.grid_resolution_m);
    sound.estimated_height_m = estimate.height_m;
    sound.residual_us = estimate.residual_us;
  }

  const auto room_of = [&config](const ImpactEvent&, const SoundEvent* sound) -> std::optional<std::string> {
    if (!sound) return std::nullopt;
    if (const auto* node = std::get_if<spaces::GraphNode>(&sound->array_position.where)) return node->room_id;
    if (const auto* c = std::get_if<spaces::Cartesian3>(&sound->array_position.where)) {
      try {
        return spaces::cartesian_to_room(c->point, config.floorplan).room_id;
      } catch (const Error&) {
        return std::nullopt;
      }
    }
    return std::nullopt;
  };
  result.alarms = fuse_events(result.impacts, result.sounds, config.params, room_of);
  return result;
}

}  // namespace tana::fall
