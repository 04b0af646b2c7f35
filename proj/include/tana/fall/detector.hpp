#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tana/spaces/types.hpp"

namespace tana::fall {

enum class AccelOnlyPolicy { Suspected, Suppressed };

struct DetectorParams {
  double theta_freefall_g = 0.3;
  double d_freefall_ms = 200.0;
  double theta_impact_g = 2.5;
  double max_gap_ms = 800.0;
  double theta_loud_db = 70.0;
  double refractory_ms = 500.0;
  double h_floor_m = 0.5;
  double fuse_window_s = 1.0;
  double grid_resolution_m = 0.025;
  AccelOnlyPolicy accel_only_policy = AccelOnlyPolicy::Suspected;
};

/// Throws InvalidDescriptor naming the first bad field.
void validate(const DetectorParams& params);

struct ImpactEvent {
  double t_s = 0.0;
  std::string entity_id;
  double peak_magnitude_g = 0.0;
  bool freefall_observed = false;
};

struct SoundEvent {
  double t_s = 0.0;
  double loudness_db = 0.0;
  double estimated_height_m = 0.0;
  double residual_us = 0.0;
  std::vector<double> offsets_us;
  // Where the capturing array sits, as the view delivered it.
  spaces::Position array_position;
};

enum class Confidence { Corroborated, AccelOnly };

std::string_view to_string(Confidence confidence);

struct FallAlarm {
  double t_s = 0.0;
  std::string entity_id;
  Confidence confidence = Confidence::AccelOnly;
  std::optional<std::string> room;

  friend bool operator==(const FallAlarm&, const FallAlarm&) = default;
};

/// Freefall (magnitude below theta_freefall_g for at least d_freefall_ms) followed within
/// max_gap_ms by magnitude above theta_impact_g. One event per freefall episode, stamped at
/// the peak of the impact excursion. Input: time-ordered accel-g samples of one entity.
std::vector<ImpactEvent> detect_impacts(const std::vector<spaces::NormalizedSample>& samples,
                                        const DetectorParams& params);

/// A candidate at each rising crossing of theta_loud_db, except within refractory_ms of the
/// previous candidate. Heights are left for estimate_source_height.
std::vector<SoundEvent> detect_sound_events(const std::vector<spaces::NormalizedSample>& frames,
                                            const DetectorParams& params);

using RoomLookup = std::function<std::optional<std::string>(const ImpactEvent&, const SoundEvent*)>;

/// Each impact yields at most one alarm: corroborated when an unused sound at or below
/// h_floor_m lies within fuse_window_s (nearest in time wins), otherwise accel-only unless
/// the policy suppresses it. Sounds without an impact never raise an alarm.
std::vector<FallAlarm> fuse_events(const std::vector<ImpactEvent>& impacts, const std::vector<SoundEvent>& sounds,
                                   const DetectorParams& params, const RoomLookup& room_lookup = {});

}  // namespace tana::fall
