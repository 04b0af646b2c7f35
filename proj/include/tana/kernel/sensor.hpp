#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tana/spaces/types.hpp"

namespace tana::kernel {

using Tick = std::int64_t;

enum class SensorKind { Accelerometer, MicrophoneArray, Thermometer };

std::string_view to_string(SensorKind kind);
std::optional<SensorKind> sensor_kind_from_string(std::string_view text);

struct SensorDescriptor {
  std::string sensor_id;
  SensorKind kind = SensorKind::Accelerometer;
  int channel_count = 1;
  std::string native_unit;
  double scale = 1.0;   // engineering units per raw count
  double offset = 0.0;  // engineering units
  spaces::Position placement;
  Tick min_period_ticks = 1;
  Tick max_period_ticks = 1;
};

/// Throws InvalidDescriptor naming the offending field.
void validate(const SensorDescriptor& descriptor);

/// Readings per RawSample. A microphone array reports one arrival offset per microphone
/// followed by the frame loudness, so it carries channel_count + 1 values.
std::size_t expected_value_count(const SensorDescriptor& descriptor);

enum class SampleStatus { Ok, DriverFault };

struct RawSample {
  std::string sensor_id;
  Tick tick = 0;
  std::uint64_t sequence_no = 0;
  std::vector<std::int64_t> values;  // raw counts
  SampleStatus status = SampleStatus::Ok;

  friend bool operator==(const RawSample&, const RawSample&) = default;
};

/// Acquisition callback: invoked once per fire with the current tick; returns raw counts.
/// Throwing marks the fire as a driver fault.
using Driver = std::function<std::vector<std::int64_t>(Tick)>;

struct RegistrationHandle {
  std::size_t index = 0;
  std::string sensor_id;
};

/// Descriptor + driver per sensor, iterated in ascending sensor_id order.
class DriverRegistry {
 public:
  RegistrationHandle register_driver(const SensorDescriptor& descriptor, Driver driver);

  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& sensor_id) const { return entries_.count(sensor_id) > 0; }
  const SensorDescriptor& descriptor(const std::string& sensor_id) const;
  std::vector<SensorDescriptor> descriptors() const;
  std::vector<std::int64_t> invoke(const std::string& sensor_id, Tick tick) const;

 private:
  struct Entry {
    SensorDescriptor descriptor;
    Driver driver;
  };
  std::map<std::string, Entry> entries_;
};

}  // namespace tana::kernel
