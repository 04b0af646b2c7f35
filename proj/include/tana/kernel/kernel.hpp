#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "tana/kernel/bounded_queue.hpp"
#include "tana/kernel/schedule.hpp"
#include "tana/kernel/sensor.hpp"

namespace tana::kernel {

enum class PacingMode { AsFastAsPossible, RealTimePaced };

/// Logical time. Pacing only decides whether the loop sleeps between ticks.
struct TickClock {
  Tick current_tick = 0;
  std::int64_t tick_quantum_us = 1000;
  PacingMode pacing_mode = PacingMode::AsFastAsPossible;

  double seconds(Tick tick) const { return static_cast<double>(tick) * static_cast<double>(tick_quantum_us) / 1e6; }
};

struct RunSummary {
  Tick ticks_elapsed = 0;
  std::map<std::string, std::uint64_t> samples_per_sensor;  // ok samples
  std::map<std::string, std::uint64_t> faults_per_sensor;

  std::uint64_t total_samples() const;
  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

using StreamRecord = std::variant<RawSample, RunSummary>;
using StreamSink = std::function<void(StreamRecord)>;

/// Many-writer queue of scripted or externally issued rate commands. The tick loop drains,
/// at the start of tick t, every command with issued_at_tick <= t in submission order.
class CommandQueue {
 public:
  void submit(RateCommand command);
  std::vector<RateCommand> drain(Tick now);
  std::size_t pending() const;

 private:
  mutable std::mutex mutex_;
  std::vector<RateCommand> commands_;
};

struct RateAck {
  Tick applied_period_ticks = 0;
  Tick effective_from_tick = 0;
};

/// The tick loop. For every tick in [0, duration) it drains due commands, then fires each due
/// enabled entry in ascending sensor_id order; the stream closes with a RunSummary record.
class AcquisitionKernel {
 public:
  AcquisitionKernel(const DriverRegistry& registry, SamplingSchedule schedule, TickClock clock);

  RunSummary run(Tick duration_ticks, const StreamSink& sink, CommandQueue* commands = nullptr);

  /// Pushes every record into `queue` and closes it afterwards. QueueOverflow propagates
  /// under the fail policy.
  RunSummary run_into(Tick duration_ticks, BoundedQueue<StreamRecord>& queue, CommandQueue* commands = nullptr);

  /// Thread-safe. Applies a period change relative to the last completed tick.
  RateAck submit_rate_command(const std::string& sensor_id, Tick new_period_ticks);

  /// Last completed tick, -1 before the first.
  Tick last_completed_tick() const { return last_completed_.load(); }
  bool finished() const { return finished_.load(); }
  void request_stop() { stop_requested_.store(true); }

  SamplingSchedule schedule_snapshot() const;
  const TickClock& clock() const { return clock_; }
  const DriverRegistry& registry() const { return registry_; }

 private:
  const DriverRegistry& registry_;
  SamplingSchedule schedule_;
  TickClock clock_;
  mutable std::mutex mutex_;
  std::atomic<Tick> last_completed_{-1};
  std::atomic<bool> finished_{false};
  std::atomic<bool> stop_requested_{false};
};

/// Convenience: runs to completion and returns every record, summary last.
std::vector<StreamRecord> run_acquisition(const SamplingSchedule& schedule, const DriverRegistry& registry,
                                          Tick duration_ticks, CommandQueue* commands = nullptr,
                                          TickClock clock = {});

}  // namespace tana::kernel
