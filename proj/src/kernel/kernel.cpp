#include "tana/kernel/kernel.hpp"

#include <chrono>
#include <thread>

namespace tana::kernel {

std::string_view to_string(QueuePolicy policy) {
  switch (policy) {
    case QueuePolicy::BlockProducer: return "block-producer";
    case QueuePolicy::DropNewest: return "drop-newest";
    case QueuePolicy::Fail: return "fail";
  }
  return "block-producer";
}

std::uint64_t RunSummary::total_samples() const {
  std::uint64_t total = 0;
  for (const auto& [id, n] : samples_per_sensor) total += n;
  return total;
}

void CommandQueue::submit(RateCommand command) {
  std::lock_guard lock(mutex_);
  commands_.push_back(std::move(command));
}

std::vector<RateCommand> CommandQueue::drain(Tick now) {
  std::lock_guard lock(mutex_);
  std::vector<RateCommand> due;
  std::vector<RateCommand> later;
  for (auto& c : commands_) (c.issued_at_tick <= now ? due : later).push_back(std::move(c));
  commands_ = std::move(later);
  return due;
}

std::size_t CommandQueue::pending() const {
  std::lock_guard lock(mutex_);
  return commands_.size();
}

AcquisitionKernel::AcquisitionKernel(const DriverRegistry& registry, SamplingSchedule schedule, TickClock clock)
    : registry_(registry), schedule_(std::move(schedule)), clock_(clock) {
  if (clock_.tick_quantum_us < 1) clock_.tick_quantum_us = 1;
}

RunSummary AcquisitionKernel::run(Tick duration_ticks, const StreamSink& sink, CommandQueue* commands) {
  RunSummary summary;
  std::map<std::string, std::uint64_t> next_sequence;
  for (const auto& slot : schedule_.slots()) {
    summary.samples_per_sensor[slot.entry.sensor_id] = 0;
    summary.faults_per_sensor[slot.entry.sensor_id] = 0;
  }

  const auto started = std::chrono::steady_clock::now();
  std::vector<RawSample> fired;
  Tick tick = 0;
  for (; tick < duration_ticks && !stop_requested_.load(); ++tick) {
    if (clock_.pacing_mode == PacingMode::RealTimePaced) {
      std::this_thread::sleep_until(started + std::chrono::microseconds(tick * clock_.tick_quantum_us));
    }
    fired.clear();
    {
      std::lock_guard lock(mutex_);
      clock_.current_tick = tick;
      if (commands) {
        for (const auto& cmd : commands->drain(tick)) schedule_.apply(cmd, tick);
      }
      const auto& slots = schedule_.slots();
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!schedule_.due(i, tick)) continue;
        const std::string& id = slots[i].entry.sensor_id;
        RawSample sample{id, tick, next_sequence[id], {}, SampleStatus::Ok};
        try {
          sample.values = registry_.invoke(id, tick);
          ++next_sequence[id];
          ++summary.samples_per_sensor[id];
        } catch (...) {
          sample.values.clear();
          sample.status = SampleStatus::DriverFault;
          ++summary.faults_per_sensor[id];
        }
        fired.push_back(std::move(sample));
        schedule_.mark_fired(i, tick);
      }
      last_completed_.store(tick);
    }
    for (auto& sample : fired) sink(std::move(sample));
  }
  summary.ticks_elapsed = tick;
  finished_.store(true);
  sink(summary);
  return summary;
}

RunSummary AcquisitionKernel::run_into(Tick duration_ticks, BoundedQueue<StreamRecord>& queue,
                                       CommandQueue* commands) {
  try {
    auto summary = run(duration_ticks, [&](StreamRecord record) { queue.push(std::move(record)); }, commands);
    queue.close();
    return summary;
  } catch (...) {
    finished_.store(true);
    queue.close();
    throw;
  }
}

RateAck AcquisitionKernel::submit_rate_command(const std::string& sensor_id, Tick new_period_ticks) {
  std::lock_guard lock(mutex_);
  if (finished_.load()) throw Error(ErrorCode::RunFinished, "acquisition run has ended");
  const Tick now = last_completed_.load();
  const Tick effective = schedule_.apply({sensor_id, new_period_ticks, now}, now);
  return {new_period_ticks, effective};
}

SamplingSchedule AcquisitionKernel::schedule_snapshot() const {
  std::lock_guard lock(mutex_);
  return schedule_;
}

std::vector<StreamRecord> run_acquisition(const SamplingSchedule& schedule, const DriverRegistry& registry,
                                          Tick duration_ticks, CommandQueue* commands, TickClock clock) {
  AcquisitionKernel kernel(registry, schedule, clock);
  std::vector<StreamRecord> out;
  kernel.run(duration_ticks, [&](StreamRecord r) { out.push_back(std::move(r)); }, commands);
  return out;
}

}  // namespace tana::kernel
