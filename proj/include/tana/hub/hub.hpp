#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tana/error.hpp"
#include "tana/fall/detector.hpp"
#include "tana/kernel/kernel.hpp"
#include "tana/spaces/registry.hpp"

namespace tana::hub {

inline constexpr std::size_t kDefaultSubscriberBuffer = 1024;

/// One consumer of a view. Lines are buffered up to a fixed bound; a subscriber that falls
/// further behind is closed with an error record instead of stalling the run.
class Subscription {
 public:
  Subscription(std::uint64_t id, std::string view_id, std::optional<spaces::PayloadKind> filter,
               kernel::Tick started_at_tick, std::size_t capacity);

  std::uint64_t id() const { return id_; }
  const std::string& view_id() const { return view_id_; }
  const std::optional<spaces::PayloadKind>& filter() const { return filter_; }
  kernel::Tick started_at_tick() const { return started_at_tick_; }

  /// Waits up to `timeout` for the next line. Returns nullopt on timeout or once the
  /// subscription is closed and drained; check `exhausted()` to tell them apart.
  std::optional<std::string> next(std::chrono::milliseconds timeout);
  bool exhausted() const;
  bool overflowed() const;

  // Producer side, used by Hub.
  void offer(std::string line);
  void close_with(std::string final_line);

 private:
  const std::uint64_t id_;
  const std::string view_id_;
  const std::optional<spaces::PayloadKind> filter_;
  const kernel::Tick started_at_tick_;
  const std::size_t capacity_;

  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<std::string> lines_;
  bool closed_ = false;
  bool overflowed_ = false;
};

/// HTTP status class for a library error raised by a hub operation.
int http_status_for(ErrorCode code);
nlohmann::ordered_json error_body(const Error& error);

/// Consumer-facing fan-out over the normalized stream plus the rate-control and event
/// surfaces. Thread-safe; the space registry is only ever read.
class Hub {
 public:
  /// `kernel` may be null, in which case rate commands fail with RunFinished.
  Hub(const spaces::SpaceRegistry& spaces, const kernel::DriverRegistry& drivers, kernel::AcquisitionKernel* kernel,
      std::int64_t tick_quantum_us, std::size_t subscriber_buffer = kDefaultSubscriberBuffer);

  nlohmann::ordered_json list_spaces() const;

  /// Throws UnknownView.
  std::shared_ptr<Subscription> subscribe(const std::string& view_id,
                                          std::optional<spaces::PayloadKind> filter = std::nullopt);
  void unsubscribe(std::uint64_t subscription_id);
  std::size_t subscriber_count() const;
  /// Blocks until at least `count` subscriptions exist or `timeout` passes.
  bool wait_for_subscribers(std::size_t count, std::chrono::milliseconds timeout) const;

  /// Delivers one sample (provenance is stripped by the view) to every matching subscriber.
  void publish(const spaces::NormalizedSample& sample);
  /// Ends every open stream with a view-safe summary line and refuses new samples.
  void finish(const kernel::RunSummary& summary);
  bool finished() const;

  /// Throws UnknownSensor, PeriodOutOfBounds, NonIntegralPeriod, MalformedQuery, RunFinished.
  kernel::RateAck post_rate_command(const std::string& sensor_id, double rate_hz);

  void set_alarms(std::vector<fall::FallAlarm> alarms);
  /// Throws MalformedQuery for negative or non-finite `since_t_s`.
  nlohmann::ordered_json list_events(double since_t_s) const;

  /// Provenance-bearing registry dump; the only surface that names sensors.
  nlohmann::ordered_json admin_sensors() const;

 private:
  const spaces::SpaceRegistry& spaces_;
  const kernel::DriverRegistry& drivers_;
  kernel::AcquisitionKernel* kernel_;
  const std::int64_t tick_quantum_us_;
  const std::size_t subscriber_buffer_;

  mutable std::mutex mutex_;
  mutable std::condition_variable subscribers_changed_;
  std::vector<std::shared_ptr<Subscription>> subscribers_;
  std::uint64_t next_id_ = 1;
  std::optional<nlohmann::ordered_json> final_summary_;
  std::vector<fall::FallAlarm> alarms_;
};

/// View-safe terminal line for consumer streams: no per-sensor breakdown.
nlohmann::ordered_json consumer_summary(const kernel::RunSummary& summary);

/// Period in ticks for `rate_hz`, or NonIntegralPeriod / MalformedQuery.
kernel::Tick period_for_rate(double rate_hz, std::int64_t tick_quantum_us);

}  // namespace tana::hub
