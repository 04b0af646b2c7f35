#pragma once

#include <cstdint>
#include <string>

#include "tana/kernel/sensor.hpp"
#include "tana/spaces/types.hpp"

namespace tana::spaces {

/// Value space a sensor's readings land in before any view is applied.
std::string native_value_space(const kernel::SensorDescriptor& descriptor);

/// Applies scale/offset, types the payload by sensor kind, stamps time = tick * quantum and
/// keeps {sensor_id, sequence_no} only in the provenance envelope.
/// Throws FaultedSample, ChannelMismatch or UnknownSensor (descriptor does not match).
NormalizedSample normalize_sample(const kernel::RawSample& raw, const kernel::SensorDescriptor& descriptor,
                                  std::int64_t tick_quantum_us);

}  // namespace tana::spaces
