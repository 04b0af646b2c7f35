#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tana {

enum class ErrorCode {
  // acquisition kernel
  DuplicateSensorId,
  InvalidDescriptor,
  UnknownSensor,
  PeriodOutOfBounds,
  InvalidPhase,
  DuplicateEntry,
  DisabledEntry,
  QueueOverflow,
  // scenario loading
  SchemaError,
  GeometryError,
  UnknownEntity,
  // normalization
  DuplicateSpaceId,
  DuplicateMappingId,
  UnknownSpace,
  InvalidMapping,
  RegistryFrozen,
  NoPath,
  PartialMappingUndefined,
  FaultedSample,
  ChannelMismatch,
  NonFiniteInput,
  OutsideFloorplan,
  InvalidFloorplan,
  UnknownView,
  // fall detection
  WrongPayloadSpace,
  DegenerateArray,
  EmptyVolume,
  // service
  NonIntegralPeriod,
  MalformedQuery,
  RunFinished,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `code()` is the stable, machine-readable
/// identifier; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace tana
