#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tana/kernel/sensor.hpp"
#include "tana/sim/scenario.hpp"

namespace tana::sim {

using Rng = std::mt19937_64;

/// Per-sensor random stream derived from the scenario seed and a stable key, so adding a
/// sensor or renaming one never perturbs any other sensor's noise.
Rng substream(std::uint64_t seed, const std::string& key);

/// Rename-invariant key: kind + placement.
std::string noise_key(const kernel::SensorDescriptor& descriptor);

/// Acceleration in g for `entity_id` at `tick`, template plus per-channel Gaussian noise.
/// Throws UnknownEntity when no body-worn accelerometer or fall names the entity.
spaces::Accel3 synth_accel_g(const Scenario& scenario, const std::string& entity_id, Tick tick, Rng& rng);

/// Same reading quantized to raw counts through the descriptor's scale/offset.
std::vector<std::int64_t> synth_accel_sample(const Scenario& scenario, const kernel::SensorDescriptor& descriptor,
                                             Tick tick, Rng& rng);

struct MicFrame {
  std::vector<double> offsets_us;  // relative to mic 0
  double loudness_db = 0.0;
};

/// Analytic TDOA frame: arrival offsets of the loudest audible event plus jitter, and its
/// loudness attenuated by 20*log10(distance to mic 0 / 1 m). Ambient frame when silent.
MicFrame synth_mic_frame(const Scenario& scenario, const MicArrayModel& model, Tick tick, Rng& rng);

std::vector<std::int64_t> encode_mic_frame(const MicFrame& frame, const kernel::SensorDescriptor& descriptor);

/// Constant ambient temperature in raw counts.
std::vector<std::int64_t> synth_temp_sample(const Scenario& scenario, const kernel::SensorDescriptor& descriptor,
                                            Tick tick);

/// Registers one driver per scenario sensor and returns the scenario's schedule entries.
std::vector<kernel::ScheduleEntry> attach_drivers(const Scenario& scenario, kernel::DriverRegistry& registry);

}  // namespace tana::sim
