#include "tana/hub/hub.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tana/error.hpp"
#include "tana/fall/evaluation.hpp"
#include "tana/spaces/wire.hpp"

namespace tana::hub {

Subscription::Subscription(std::uint64_t id, std::string view_id, std::optional<spaces::PayloadKind> filter,
                           kernel::Tick started_at_tick, std::size_t capacity)
    : id_(id),
      view_id_(std::move(view_id)),
      filter_(filter),
      started_at_tick_(started_at_tick),
      capacity_(capacity) {}

std::optional<std::string> Subscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  ready_.wait_for(lock, timeout, [this] { return !lines_.empty() || closed_; });
  if (lines_.empty()) return std::nullopt;
  std::string line = std::move(lines_.front());
  lines_.pop_front();
  return line;
}

bool Subscription::exhausted() const {
  std::lock_guard lock(mutex_);
  return closed_ && lines_.empty();
}

bool Subscription::overflowed() const {
  std::lock_guard lock(mutex_);
  return overflowed_;
}

void Subscription::offer(std::string line) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    if (lines_.size() >= capacity_) {
      overflowed_ = true;
      closed_ = true;
      nlohmann::ordered_json err;
      err["type"] = "error";
      err["error"] = "SubscriberOverflow";
      err["detail"] = "subscriber fell more than " + std::to_string(capacity_) + " lines behind";
      lines_.push_back(err.dump());
    } else {
      lines_.push_back(std::move(line));
    }
  }
  ready_.notify_all();
}

void Subscription::close_with(std::string final_line) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    closed_ = true;
    lines_.push_back(std::move(final_line));
  }
  ready_.notify_all();
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSensor:
    case ErrorCode::UnknownView: return 404;
    case ErrorCode::PeriodOutOfBounds:
    case ErrorCode::NonIntegralPeriod: return 422;
    case ErrorCode::MalformedQuery: return 400;
    case ErrorCode::RunFinished: return 409;
    default: return 500;
  }
}

nlohmann::ordered_json error_body(const Error& error) {
  nlohmann::ordered_json body;
  body["error"] = std::string(to_string(error.code()));
  body["detail"] = error.detail();
  return body;
}

nlohmann::ordered_json consumer_summary(const kernel::RunSummary& summary) {
  nlohmann::ordered_json out;
  out["type"] = "run_summary";
  out["ticks_elapsed"] = summary.ticks_elapsed;
  out["samples"] = summary.total_samples();
  return out;
}

kernel::Tick period_for_rate(double rate_hz, std::int64_t tick_quantum_us) {
  if (!std::isfinite(rate_hz) || rate_hz <= 0.0) {
    throw Error(ErrorCode::MalformedQuery, "rate_hz must be a positive number");
  }
  const double exact = 1e6 / (rate_hz * static_cast<double>(tick_quantum_us));
  const double rounded = std::round(exact);
  if (rounded < 1.0 || std::abs(exact - rounded) > 1e-9 * std::max(1.0, exact)) {
    throw Error(ErrorCode::NonIntegralPeriod, std::to_string(exact) + " ticks");
  }
  return static_cast<kernel::Tick>(rounded);
}

Hub::Hub(const spaces::SpaceRegistry& spaces, const kernel::DriverRegistry& drivers,
         kernel::AcquisitionKernel* kernel, std::int64_t tick_quantum_us, std::size_t subscriber_buffer)
    : spaces_(spaces),
      drivers_(drivers),
      kernel_(kernel),
      tick_quantum_us_(tick_quantum_us),
      subscriber_buffer_(subscriber_buffer) {}

nlohmann::ordered_json Hub::list_spaces() const {
  auto out = nlohmann::ordered_json::array();
  for (const auto& d : spaces_.spaces()) out.push_back(spaces::to_json(d));
  return out;
}

std::shared_ptr<Subscription> Hub::subscribe(const std::string& view_id,
                                             std::optional<spaces::PayloadKind> filter) {
  if (!spaces_.has_view(view_id)) throw Error(ErrorCode::UnknownView, view_id);
  std::shared_ptr<Subscription> sub;
  {
    std::lock_guard lock(mutex_);
    const kernel::Tick started = kernel_ ? kernel_->last_completed_tick() + 1 : 0;
    sub = std::make_shared<Subscription>(next_id_++, view_id, filter, started, subscriber_buffer_);
    if (final_summary_) {
      sub->close_with(final_summary_->dump());
    } else {
      subscribers_.push_back(sub);
    }
  }
  subscribers_changed_.notify_all();
  return sub;
}

void Hub::unsubscribe(std::uint64_t subscription_id) {
  {
    std::lock_guard lock(mutex_);
    std::erase_if(subscribers_, [&](const auto& s) { return s->id() == subscription_id; });
  }
  subscribers_changed_.notify_all();
}

std::size_t Hub::subscriber_count() const {
  std::lock_guard lock(mutex_);
  return subscribers_.size();
}

bool Hub::wait_for_subscribers(std::size_t count, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  return subscribers_changed_.wait_for(lock, timeout, [&] { return subscribers_.size() >= count; });
}

void Hub::publish(const spaces::NormalizedSample& sample) {
  std::lock_guard lock(mutex_);
  if (final_summary_) return;
  const auto kind = spaces::payload_kind(sample.payload);
  // One rendering per view, shared by every subscriber of that view.
  std::map<std::string, std::string> rendered;
  for (const auto& sub : subscribers_) {
    if (sub->filter() && *sub->filter() != kind) continue;
    auto it = rendered.find(sub->view_id());
    if (it == rendered.end()) {
      const auto& view = spaces_.view(sub->view_id());
      it = rendered.emplace(sub->view_id(), spaces::to_wire_line(spaces::apply_view(sample, view, spaces_))).first;
    }
    sub->offer(it->second);
  }
  std::erase_if(subscribers_, [](const auto& s) { return s->overflowed(); });
}

void Hub::finish(const kernel::RunSummary& summary) {
  std::vector<std::shared_ptr<Subscription>> open;
  {
    std::lock_guard lock(mutex_);
    if (final_summary_) return;
    final_summary_ = consumer_summary(summary);
    open = subscribers_;  // stay listed until their streams release them
  }
  const auto line = final_summary_->dump();
  for (const auto& sub : open) sub->close_with(line);
  subscribers_changed_.notify_all();
}

bool Hub::finished() const {
  std::lock_guard lock(mutex_);
  return final_summary_.has_value();
}

kernel::RateAck Hub::post_rate_command(const std::string& sensor_id, double rate_hz) {
  if (!drivers_.contains(sensor_id)) throw Error(ErrorCode::UnknownSensor, sensor_id);
  const auto period = period_for_rate(rate_hz, tick_quantum_us_);
  if (!kernel_) throw Error(ErrorCode::RunFinished, "no acquisition run attached");
  return kernel_->submit_rate_command(sensor_id, period);
}

void Hub::set_alarms(std::vector<fall::FallAlarm> alarms) {
  std::stable_sort(alarms.begin(), alarms.end(),
                   [](const fall::FallAlarm& a, const fall::FallAlarm& b) { return a.t_s < b.t_s; });
  std::lock_guard lock(mutex_);
  alarms_ = std::move(alarms);
}

nlohmann::ordered_json Hub::list_events(double since_t_s) const {
  if (!std::isfinite(since_t_s) || since_t_s < 0.0) {
    throw Error(ErrorCode::MalformedQuery, "since must be a non-negative number");
  }
  auto out = nlohmann::ordered_json::array();
  std::lock_guard lock(mutex_);
  for (const auto& alarm : alarms_) {
    if (alarm.t_s >= since_t_s) out.push_back(fall::to_json(alarm));
  }
  return out;
}

nlohmann::ordered_json Hub::admin_sensors() const {
  std::optional<kernel::SamplingSchedule> schedule;
  if (kernel_) schedule = kernel_->schedule_snapshot();
  auto out = nlohmann::ordered_json::array();
  for (const auto& d : drivers_.descriptors()) {
    nlohmann::ordered_json j;
    j["sensor_id"] = d.sensor_id;
    j["kind"] = std::string(kernel::to_string(d.kind));
    j["channel_count"] = d.channel_count;
    j["native_unit"] = d.native_unit;
    j["scale"] = d.scale;
    j["offset"] = d.offset;
    nlohmann::ordered_json placement;
    placement["space"] = d.placement.space_id;
    if (const auto* c = std::get_if<spaces::Cartesian3>(&d.placement.where)) {
      placement["coords"] = {c->point.x, c->point.y, c->point.z};
    } else if (const auto* b = std::get_if<spaces::BodyWorn>(&d.placement.where)) {
      placement["entity"] = b->entity_id;
      placement["attachment"] = b->attachment;
    }
    j["placement"] = placement;
    j["min_period_ticks"] = d.min_period_ticks;
    j["max_period_ticks"] = d.max_period_ticks;
    if (schedule) {
      const auto& entry = schedule->entry(d.sensor_id);
      j["period_ticks"] = entry.period_ticks;
      j["phase_ticks"] = entry.phase_ticks;
      j["enabled"] = entry.enabled;
    }
    out.push_back(j);
  }
  return out;
}

}  // namespace tana::hub
