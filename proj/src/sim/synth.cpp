#include "tana/sim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>

#include "tana/error.hpp"
#include "tana/spaces/standard.hpp"

namespace tana::sim {
namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::int64_t to_counts(double engineering, const kernel::SensorDescriptor& d) {
  return std::llround((engineering - d.offset) / d.scale);
}

bool entity_known(const Scenario& scenario, const std::string& entity_id) {
  for (const auto& s : scenario.sensors) {
    if (const auto* b = std::get_if<spaces::BodyWorn>(&s.descriptor.placement.where); b && b->entity_id == entity_id) {
      return true;
    }
  }
  return std::any_of(scenario.events.begin(), scenario.events.end(),
                     [&](const ScriptedEvent& e) { return e.kind == EventKind::Fall && e.entity_id == entity_id; });
}

}  // namespace

Rng substream(std::uint64_t seed, const std::string& key) { return Rng(splitmix64(seed ^ fnv1a(key))); }

std::string noise_key(const kernel::SensorDescriptor& descriptor) {
  std::string key(kernel::to_string(descriptor.kind));
  key += '|';
  std::visit(
      [&](const auto& where) {
        using T = std::decay_t<decltype(where)>;
        char buf[96];
        if constexpr (std::is_same_v<T, spaces::Cartesian3>) {
          std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", where.point.x, where.point.y, where.point.z);
          key += buf;
        } else if constexpr (std::is_same_v<T, spaces::GraphNode>) {
          key += where.room_id;
        } else {
          key += where.entity_id + "/" + where.attachment;
        }
      },
      descriptor.placement.where);
  return key;
}

spaces::Accel3 synth_accel_g(const Scenario& scenario, const std::string& entity_id, Tick tick, Rng& rng) {
  if (!entity_known(scenario, entity_id)) throw Error(ErrorCode::UnknownEntity, entity_id);
  const auto& tpl = scenario.accel_template;

  const ScriptedEvent* fall = nullptr;
  for (const auto& e : scenario.events) {
    if (e.kind != EventKind::Fall || e.entity_id != entity_id || e.t_start_ticks > tick) continue;
    if (!fall || e.t_start_ticks >= fall->t_start_ticks) fall = &e;
  }

  spaces::Accel3 a{0.0, 0.0, tpl.rest_magnitude};
  if (fall) {
    const double u_us = static_cast<double>(tick - fall->t_start_ticks) * static_cast<double>(scenario.tick_quantum_us);
    const double ff_us = tpl.freefall_duration_ms * 1000.0;
    const double width_us = tpl.impact_width_ms * 1000.0;
    if (u_us < ff_us) {
      a = {0.0, 0.0, tpl.freefall_magnitude};
    } else if (u_us < ff_us + width_us) {
      const double m = tpl.impact_peak_g - (tpl.impact_peak_g - tpl.rest_magnitude) * (u_us - ff_us) / width_us;
      a = {0.0, 0.0, m};
    } else {
      // lying on the floor: gravity along the device x axis
      a = {tpl.rest_magnitude, 0.0, 0.0};
    }
  }

  std::normal_distribution<double> unit(0.0, 1.0);
  const double sigma = scenario.noise.accel_sigma_g;
  const double nx = unit(rng), ny = unit(rng), nz = unit(rng);
  a.ax += sigma * nx;
  a.ay += sigma * ny;
  a.az += sigma * nz;
  return a;
}

std::vector<std::int64_t> synth_accel_sample(const Scenario& scenario, const kernel::SensorDescriptor& descriptor,
                                             Tick tick, Rng& rng) {
  const auto* body = std::get_if<spaces::BodyWorn>(&descriptor.placement.where);
  if (!body) throw Error(ErrorCode::UnknownEntity, descriptor.sensor_id + " is not body-worn");
  const auto a = synth_accel_g(scenario, body->entity_id, tick, rng);
  return {to_counts(a.ax, descriptor), to_counts(a.ay, descriptor), to_counts(a.az, descriptor)};
}

MicFrame synth_mic_frame(const Scenario& scenario, const MicArrayModel& model, Tick tick, Rng& rng) {
  const auto& mics = model.mic_positions;
  const std::size_t n = mics.size();

  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> jitter(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) jitter[i] = unit(rng);

  const ScriptedEvent* loudest = nullptr;
  double loudest_db = 0.0;
  for (const auto& e : scenario.events) {
    const auto [start, end] = sound_interval(scenario, e);
    if (tick < start || tick >= end) continue;
    const double d0 = std::max(spaces::distance(mics.front(), e.position), 1e-3);
    const double level = e.loudness_db - 20.0 * std::log10(d0 / 1.0);
    if (!loudest || level > loudest_db) {
      loudest = &e;
      loudest_db = level;
    }
  }

  MicFrame frame;
  frame.offsets_us.assign(n, 0.0);
  if (!loudest) {
    frame.loudness_db = model.loudness_floor_db;
    return frame;
  }
  const double d0 = spaces::distance(mics.front(), loudest->position);
  for (std::size_t i = 1; i < n; ++i) {
    const double di = spaces::distance(mics[i], loudest->position);
    frame.offsets_us[i] = (di - d0) / model.speed_of_sound_mps * 1e6 + scenario.noise.tdoa_jitter_us * jitter[i];
  }
  frame.loudness_db = loudest_db;
  return frame;
}

std::vector<std::int64_t> encode_mic_frame(const MicFrame& frame, const kernel::SensorDescriptor& descriptor) {
  std::vector<std::int64_t> counts;
  counts.reserve(frame.offsets_us.size() + 1);
  for (double o : frame.offsets_us) counts.push_back(to_counts(o, descriptor));
  counts.push_back(to_counts(frame.loudness_db, descriptor));
  return counts;
}

std::vector<std::int64_t> synth_temp_sample(const Scenario& scenario, const kernel::SensorDescriptor& descriptor,
                                            Tick /*tick*/) {
  const double value =
      descriptor.native_unit == "fahrenheit" ? spaces::celsius_to_fahrenheit(scenario.ambient_c) : scenario.ambient_c;
  return {to_counts(value, descriptor)};
}

std::vector<kernel::ScheduleEntry> attach_drivers(const Scenario& scenario, kernel::DriverRegistry& registry) {
  auto shared = std::make_shared<const Scenario>(scenario);
  std::map<std::string, int> key_uses;
  std::vector<kernel::ScheduleEntry> entries;

  for (const auto& cfg : shared->sensors) {
    const auto& d = cfg.descriptor;
    std::string key = noise_key(d);
    key += "#" + std::to_string(key_uses[key]++);
    auto rng = std::make_shared<Rng>(substream(shared->seed, key));
    auto calls = std::make_shared<std::int64_t>(0);
    const std::optional<int> fault_every = cfg.fault_every;

    kernel::Driver driver;
    switch (d.kind) {
      case kernel::SensorKind::Accelerometer:
        driver = [shared, d, rng](Tick t) { return synth_accel_sample(*shared, d, t, *rng); };
        break;
      case kernel::SensorKind::MicrophoneArray:
        driver = [shared, d, rng, model = *cfg.mic_array](Tick t) {
          return encode_mic_frame(synth_mic_frame(*shared, model, t, *rng), d);
        };
        break;
      case kernel::SensorKind::Thermometer:
        driver = [shared, d](Tick t) { return synth_temp_sample(*shared, d, t); };
        break;
    }
    if (fault_every) {
      driver = [inner = std::move(driver), calls, every = *fault_every](Tick t) {
        if (++*calls % every == 0) throw std::runtime_error("simulated driver fault");
        return inner(t);
      };
    }
    registry.register_driver(d, std::move(driver));
    entries.push_back(cfg.schedule);
  }
  return entries;
}

}  // namespace tana::sim
