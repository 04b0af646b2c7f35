#pragma once

#include <deque>
#include <string>
#include <vector>

#include "tana/kernel/sensor.hpp"

namespace tana::kernel {

struct ScheduleEntry {
  std::string sensor_id;
  Tick period_ticks = 1;
  Tick phase_ticks = 0;
  bool enabled = true;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct RateCommand {
  std::string sensor_id;
  Tick new_period_ticks = 1;
  Tick issued_at_tick = 0;
};

/// Smallest t > now with (t - phase) mod period == 0. Throws DisabledEntry.
Tick next_fire_tick(const ScheduleEntry& entry, Tick now);

/// |{k >= 0 : phase + k * period < duration}|.
Tick expected_sample_count(Tick period_ticks, Tick phase_ticks, Tick duration_ticks);

/// Validated schedule plus the per-entry firing state the tick loop advances.
class SamplingSchedule {
 public:
  struct PendingChange {
    Tick switch_tick;
    Tick new_period;
  };

  struct Slot {
    ScheduleEntry entry;
    Tick min_period_ticks = 1;
    Tick max_period_ticks = 1;
    Tick next_fire = 0;
    std::deque<PendingChange> pending;
  };

  /// Slots in ascending sensor_id order.
  const std::vector<Slot>& slots() const { return slots_; }
  const Slot& slot(const std::string& sensor_id) const;
  const ScheduleEntry& entry(const std::string& sensor_id) const { return slot(sensor_id).entry; }

  /// Schedules a period change at the entry's next fire strictly after `now` and returns
  /// that tick. The switch fire itself still happens; later fires follow the new period
  /// with phase = switch_tick mod new_period.
  Tick apply(const RateCommand& command, Tick now);

  /// Tick the period of `command` would take effect at, without changing anything.
  Tick switch_tick_for(const std::string& sensor_id, Tick now) const;

  bool due(std::size_t slot_index, Tick tick) const;
  /// Records a fire at `tick` and advances the slot to its next fire.
  void mark_fired(std::size_t slot_index, Tick tick);

 private:
  friend SamplingSchedule build_schedule(const std::vector<ScheduleEntry>&, const DriverRegistry&);
  Slot& mutable_slot(const std::string& sensor_id);
  static void advance(Slot& slot, Tick fired_at);

  std::vector<Slot> slots_;
};

/// Throws UnknownSensor, PeriodOutOfBounds, InvalidPhase or DuplicateEntry.
SamplingSchedule build_schedule(const std::vector<ScheduleEntry>& entries, const DriverRegistry& registry);

/// Value-returning form of SamplingSchedule::apply.
SamplingSchedule apply_rate_command(SamplingSchedule schedule, const RateCommand& command, Tick now);

}  // namespace tana::kernel
