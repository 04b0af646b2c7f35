#include "tana/kernel/schedule.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "tana/error.hpp"

namespace tana::kernel {

Tick next_fire_tick(const ScheduleEntry& entry, Tick now) {
  if (!entry.enabled) throw Error(ErrorCode::DisabledEntry, entry.sensor_id);
  if (entry.period_ticks < 1) throw Error(ErrorCode::PeriodOutOfBounds, entry.sensor_id);
  if (now < entry.phase_ticks) return entry.phase_ticks;
  const Tick k = (now - entry.phase_ticks) / entry.period_ticks + 1;
  return entry.phase_ticks + k * entry.period_ticks;
}

Tick expected_sample_count(Tick period_ticks, Tick phase_ticks, Tick duration_ticks) {
  if (period_ticks < 1 || duration_ticks <= phase_ticks) return 0;
  return (duration_ticks - phase_ticks - 1) / period_ticks + 1;
}

const SamplingSchedule::Slot& SamplingSchedule::slot(const std::string& sensor_id) const {
  auto it = std::find_if(slots_.begin(), slots_.end(), [&](const Slot& s) { return s.entry.sensor_id == sensor_id; });
  if (it == slots_.end()) throw Error(ErrorCode::UnknownSensor, sensor_id);
  return *it;
}

SamplingSchedule::Slot& SamplingSchedule::mutable_slot(const std::string& sensor_id) {
  return const_cast<Slot&>(std::as_const(*this).slot(sensor_id));
}

void SamplingSchedule::advance(Slot& slot, Tick fired_at) {
  if (!slot.pending.empty() && slot.pending.front().switch_tick == fired_at) {
    const Tick period = slot.pending.front().new_period;
    slot.pending.pop_front();
    slot.entry.period_ticks = period;
    slot.entry.phase_ticks = fired_at % period;
  }
  slot.next_fire = fired_at + slot.entry.period_ticks;
}

Tick SamplingSchedule::switch_tick_for(const std::string& sensor_id, Tick now) const {
  Slot probe = slot(sensor_id);
  if (!probe.entry.enabled) return next_fire_tick({sensor_id, probe.entry.period_ticks, probe.entry.phase_ticks}, now);
  while (probe.next_fire <= now) advance(probe, probe.next_fire);
  return probe.next_fire;
}

Tick SamplingSchedule::apply(const RateCommand& command, Tick now) {
  Slot& target = mutable_slot(command.sensor_id);
  if (command.new_period_ticks < target.min_period_ticks || command.new_period_ticks > target.max_period_ticks) {
    throw Error(ErrorCode::PeriodOutOfBounds, command.sensor_id + ": period " +
                                                  std::to_string(command.new_period_ticks) + " outside [" +
                                                  std::to_string(target.min_period_ticks) + ", " +
                                                  std::to_string(target.max_period_ticks) + "]");
  }
  const Tick switch_tick = switch_tick_for(command.sensor_id, now);
  if (!target.entry.enabled) {
    target.entry.period_ticks = command.new_period_ticks;
    target.entry.phase_ticks = switch_tick % command.new_period_ticks;
    return switch_tick;
  }
  // A later command supersedes any change that has not taken effect by its own switch.
  while (!target.pending.empty() && target.pending.back().switch_tick >= switch_tick) target.pending.pop_back();
  target.pending.push_back({switch_tick, command.new_period_ticks});
  return switch_tick;
}

bool SamplingSchedule::due(std::size_t slot_index, Tick tick) const {
  const auto& s = slots_.at(slot_index);
  return s.entry.enabled && s.next_fire == tick;
}

void SamplingSchedule::mark_fired(std::size_t slot_index, Tick tick) { advance(slots_.at(slot_index), tick); }

SamplingSchedule build_schedule(const std::vector<ScheduleEntry>& entries, const DriverRegistry& registry) {
  SamplingSchedule schedule;
  std::set<std::string> seen;
  for (const auto& entry : entries) {
    if (!registry.contains(entry.sensor_id)) throw Error(ErrorCode::UnknownSensor, entry.sensor_id);
    if (!seen.insert(entry.sensor_id).second) throw Error(ErrorCode::DuplicateEntry, entry.sensor_id);
    const auto& d = registry.descriptor(entry.sensor_id);
    if (entry.period_ticks < 1 || entry.period_ticks < d.min_period_ticks || entry.period_ticks > d.max_period_ticks) {
      throw Error(ErrorCode::PeriodOutOfBounds,
                  entry.sensor_id + ": period " + std::to_string(entry.period_ticks));
    }
    if (entry.phase_ticks < 0 || entry.phase_ticks >= entry.period_ticks) {
      throw Error(ErrorCode::InvalidPhase, entry.sensor_id + ": phase " + std::to_string(entry.phase_ticks));
    }
    schedule.slots_.push_back({entry, d.min_period_ticks, d.max_period_ticks, entry.phase_ticks, {}});
  }
  std::sort(schedule.slots_.begin(), schedule.slots_.end(),
            [](const auto& a, const auto& b) { return a.entry.sensor_id < b.entry.sensor_id; });
  return schedule;
}

SamplingSchedule apply_rate_command(SamplingSchedule schedule, const RateCommand& command, Tick now) {
  schedule.apply(command, now);
  return schedule;
}

}  // namespace tana::kernel
