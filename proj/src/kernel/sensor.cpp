#include "tana/kernel/sensor.hpp"

#include <cmath>

#include "tana/error.hpp"

namespace tana::kernel {

std::string_view to_string(SensorKind kind) {
  switch (kind) {
    case SensorKind::Accelerometer: return "accelerometer";
    case SensorKind::MicrophoneArray: return "microphone-array";
    case SensorKind::Thermometer: return "thermometer";
  }
  return "accelerometer";
}

std::optional<SensorKind> sensor_kind_from_string(std::string_view text) {
  for (auto kind : {SensorKind::Accelerometer, SensorKind::MicrophoneArray, SensorKind::Thermometer}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

void validate(const SensorDescriptor& d) {
  auto fail = [](const char* field) { throw Error(ErrorCode::InvalidDescriptor, field); };
  if (d.sensor_id.empty()) fail("sensor_id");
  if (d.channel_count < 1) fail("channel_count");
  switch (d.kind) {
    case SensorKind::Accelerometer:
      if (d.channel_count != 3) fail("channel_count");
      break;
    case SensorKind::Thermometer:
      if (d.channel_count != 1) fail("channel_count");
      break;
    case SensorKind::MicrophoneArray:
      if (d.channel_count < 3) fail("channel_count");
      break;
  }
  if (d.scale == 0.0 || !std::isfinite(d.scale)) fail("scale");
  if (!std::isfinite(d.offset)) fail("offset");
  if (d.min_period_ticks < 1) fail("min_period_ticks");
  if (d.max_period_ticks < d.min_period_ticks) fail("max_period_ticks");
  if (spaces::required_space_kind(d.placement) == spaces::SpaceKind::BuildingGraph) fail("placement");
  if (d.placement.space_id.empty()) fail("placement");
}

std::size_t expected_value_count(const SensorDescriptor& descriptor) {
  const auto channels = static_cast<std::size_t>(descriptor.channel_count);
  return descriptor.kind == SensorKind::MicrophoneArray ? channels + 1 : channels;
}

RegistrationHandle DriverRegistry::register_driver(const SensorDescriptor& descriptor, Driver driver) {
  if (entries_.count(descriptor.sensor_id)) throw Error(ErrorCode::DuplicateSensorId, descriptor.sensor_id);
  validate(descriptor);
  if (!driver) throw Error(ErrorCode::InvalidDescriptor, "driver");
  entries_.emplace(descriptor.sensor_id, Entry{descriptor, std::move(driver)});
  return {entries_.size() - 1, descriptor.sensor_id};
}

const SensorDescriptor& DriverRegistry::descriptor(const std::string& sensor_id) const {
  auto it = entries_.find(sensor_id);
  if (it == entries_.end()) throw Error(ErrorCode::UnknownSensor, sensor_id);
  return it->second.descriptor;
}

std::vector<SensorDescriptor> DriverRegistry::descriptors() const {
  std::vector<SensorDescriptor> out;
  out.reserve(entries_.size());
  for (const auto& [id, entry] : entries_) out.push_back(entry.descriptor);
  return out;
}

std::vector<std::int64_t> DriverRegistry::invoke(const std::string& sensor_id, Tick tick) const {
  auto it = entries_.find(sensor_id);
  if (it == entries_.end()) throw Error(ErrorCode::UnknownSensor, sensor_id);
  return it->second.driver(tick);
}

}  // namespace tana::kernel
