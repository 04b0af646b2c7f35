#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "tana/error.hpp"
#include "tana/kernel/kernel.hpp"
#include "tana/spaces/standard.hpp"

namespace tana::test {

inline kernel::SensorDescriptor thermometer(const std::string& id, kernel::Tick min_period = 1,
                                            kernel::Tick max_period = 100000) {
  kernel::SensorDescriptor d;
  d.sensor_id = id;
  d.kind = kernel::SensorKind::Thermometer;
  d.channel_count = 1;
  d.native_unit = "celsius";
  d.scale = 0.01;
  d.placement = {spaces::Cartesian3{{1.0, 1.0, 1.0}}, spaces::kRoomCartesian};
  d.min_period_ticks = min_period;
  d.max_period_ticks = max_period;
  return d;
}

inline kernel::SensorDescriptor accelerometer(const std::string& id, const std::string& entity = "resident") {
  kernel::SensorDescriptor d;
  d.sensor_id = id;
  d.kind = kernel::SensorKind::Accelerometer;
  d.channel_count = 3;
  d.native_unit = "g";
  d.scale = 0.001;
  d.placement = {spaces::BodyWorn{entity, "waist"}, spaces::kBodyFrame};
  d.min_period_ticks = 1;
  d.max_period_ticks = 100000;
  return d;
}

inline kernel::Driver constant_driver(std::int64_t value = 0) {
  return [value](kernel::Tick) { return std::vector<std::int64_t>{value}; };
}

// Expects `fn` to throw tana::Error with `code`.
template <typename Fn>
void check_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL("expected " << to_string(code));
  } catch (const Error& e) {
    CHECK_MESSAGE(e.code() == code, "got " << e.what());
  }
}

inline std::vector<kernel::RawSample> samples_of(const std::vector<kernel::StreamRecord>& records) {
  std::vector<kernel::RawSample> out;
  for (const auto& r : records) {
    if (const auto* s = std::get_if<kernel::RawSample>(&r)) out.push_back(*s);
  }
  return out;
}

}  // namespace tana::test
