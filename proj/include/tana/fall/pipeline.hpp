#pragma once

#include <vector>

#include "tana/fall/detector.hpp"
#include "tana/fall/localization.hpp"
#include "tana/spaces/building_graph.hpp"

namespace tana::fall {

struct PipelineConfig {
  DetectorParams params;
  std::vector<spaces::Vec3> mic_positions;
  double speed_of_sound_mps = 343.0;
  SearchVolume search_volume;
  spaces::BuildingGraph floorplan;
};

struct PipelineResult {
  std::vector<ImpactEvent> impacts;
  std::vector<SoundEvent> sounds;
  std::vector<FallAlarm> alarms;
};

/// Detection chain over time-ordered, view-applied samples: impacts per wearer, loud
/// sounds with estimated heights, then fusion. Temperature and other payloads are ignored.
PipelineResult run_fall_pipeline(const std::vector<spaces::NormalizedSample>& samples, const PipelineConfig& config);

}  // namespace tana::fall
