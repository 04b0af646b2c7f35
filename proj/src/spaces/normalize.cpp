#include "tana/spaces/normalize.hpp"

#include "tana/error.hpp"
#include "tana/spaces/standard.hpp"

namespace tana::spaces {

std::string native_value_space(const kernel::SensorDescriptor& descriptor) {
  switch (descriptor.kind) {
    case kernel::SensorKind::Accelerometer: return kAccelG;
    case kernel::SensorKind::MicrophoneArray: return kTdoaFrame;
    case kernel::SensorKind::Thermometer:
      if (descriptor.native_unit == "celsius") return kCelsius;
      if (descriptor.native_unit == "fahrenheit") return kFahrenheit;
      throw Error(ErrorCode::InvalidDescriptor, "native_unit");
  }
  throw Error(ErrorCode::InvalidDescriptor, "kind");
}

NormalizedSample normalize_sample(const kernel::RawSample& raw, const kernel::SensorDescriptor& descriptor,
                                  std::int64_t tick_quantum_us) {
  if (raw.status != kernel::SampleStatus::Ok) throw Error(ErrorCode::FaultedSample, raw.sensor_id);
  if (raw.sensor_id != descriptor.sensor_id) {
    throw Error(ErrorCode::UnknownSensor, "sample from " + raw.sensor_id + " given descriptor " + descriptor.sensor_id);
  }
  if (raw.values.size() != kernel::expected_value_count(descriptor)) {
    throw Error(ErrorCode::ChannelMismatch, raw.sensor_id + ": expected " +
                                                std::to_string(kernel::expected_value_count(descriptor)) +
                                                " values, got " + std::to_string(raw.values.size()));
  }

  auto eng = [&](std::size_t i) { return static_cast<double>(raw.values[i]) * descriptor.scale + descriptor.offset; };

  Payload payload;
  payload.space_id = native_value_space(descriptor);
  switch (descriptor.kind) {
    case kernel::SensorKind::Accelerometer:
      payload.value = Accel3{eng(0), eng(1), eng(2)};
      break;
    case kernel::SensorKind::Thermometer:
      payload.value = Temperature{eng(0)};
      break;
    case kernel::SensorKind::MicrophoneArray: {
      SoundFrame frame;
      const std::size_t mics = raw.values.size() - 1;
      for (std::size_t i = 0; i < mics; ++i) frame.offsets_us.push_back(eng(i));
      frame.loudness_db = eng(mics);
      payload.value = std::move(frame);
      break;
    }
  }

  NormalizedSample sample;
  sample.position = descriptor.placement;
  sample.payload = std::move(payload);
  sample.time = {static_cast<double>(raw.tick) * static_cast<double>(tick_quantum_us) / 1e6, kTimeSeconds};
  sample.provenance = Provenance{raw.sensor_id, raw.sequence_no};
  return sample;
}

}  // namespace tana::spaces
