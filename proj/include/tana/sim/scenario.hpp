#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tana/kernel/schedule.hpp"
#include "tana/kernel/sensor.hpp"
#include "tana/spaces/building_graph.hpp"

namespace tana::sim {

using kernel::Tick;
using spaces::Vec3;

enum class EventKind { Fall, Music, Footstep };

std::string_view to_string(EventKind kind);

struct ScriptedEvent {
  EventKind kind = EventKind::Fall;
  Tick t_start_ticks = 0;
  Vec3 position;
  double loudness_db = 0.0;  // SPL at 1 m
  std::string entity_id;     // falls only
  // How long the event is audible. Defaults: fall = impact width, music 3 s, footstep 60 ms.
  std::optional<double> duration_ms;
};

struct AccelWaveformTemplate {
  double rest_magnitude = 1.0;
  double freefall_magnitude = 0.05;
  double freefall_duration_ms = 300.0;
  double impact_peak_g = 3.0;
  double impact_width_ms = 40.0;
  double settle_ms = 500.0;
};

struct MicArrayModel {
  std::vector<Vec3> mic_positions;
  double speed_of_sound_mps = 343.0;
  Tick frame_period_ticks = 10;
  double loudness_floor_db = 35.0;
};

struct NoiseParams {
  double accel_sigma_g = 0.05;
  double tdoa_jitter_us = 20.0;
};

struct SensorConfig {
  kernel::SensorDescriptor descriptor;
  kernel::ScheduleEntry schedule;
  std::optional<MicArrayModel> mic_array;  // microphone-array sensors only
  // Driver throws on every n-th call (1-based) when set.
  std::optional<int> fault_every;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  Tick duration_ticks = 0;
  std::int64_t tick_quantum_us = 1000;
  spaces::BuildingGraph floorplan;
  std::vector<SensorConfig> sensors;
  std::vector<ScriptedEvent> events;
  NoiseParams noise;
  AccelWaveformTemplate accel_template;
  double ambient_c = 21.0;
  std::vector<kernel::RateCommand> rate_commands;

  const SensorConfig* mic_array_sensor() const;
};

/// Parses and validates a scenario document. Throws SchemaError (detail = JSON path of the
/// offending field) or GeometryError.
Scenario load_scenario(const nlohmann::json& document);
Scenario load_scenario_text(std::string_view text);
Scenario load_scenario_file(const std::string& path);

struct TruthRecord {
  EventKind kind = EventKind::Fall;
  double time_s = 0.0;
  Vec3 position;
  std::string entity_id;
};

/// One record per scripted event, ordered by time (stable for ties).
std::vector<TruthRecord> ground_truth_events(const Scenario& scenario);

/// Inclusive start, exclusive end of the interval during which the event is audible.
std::pair<Tick, Tick> sound_interval(const Scenario& scenario, const ScriptedEvent& event);

Tick ms_to_ticks(double ms, std::int64_t tick_quantum_us);

}  // namespace tana::sim
