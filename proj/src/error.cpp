#include "tana/error.hpp"

namespace tana {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateSensorId: return "DuplicateSensorId";
    case ErrorCode::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorCode::UnknownSensor: return "UnknownSensor";
    case ErrorCode::PeriodOutOfBounds: return "PeriodOutOfBounds";
    case ErrorCode::InvalidPhase: return "InvalidPhase";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::DisabledEntry: return "DisabledEntry";
    case ErrorCode::QueueOverflow: return "QueueOverflow";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::GeometryError: return "GeometryError";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::DuplicateSpaceId: return "DuplicateSpaceId";
    case ErrorCode::DuplicateMappingId: return "DuplicateMappingId";
    case ErrorCode::UnknownSpace: return "UnknownSpace";
    case ErrorCode::InvalidMapping: return "InvalidMapping";
    case ErrorCode::RegistryFrozen: return "RegistryFrozen";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::PartialMappingUndefined: return "PartialMappingUndefined";
    case ErrorCode::FaultedSample: return "FaultedSample";
    case ErrorCode::ChannelMismatch: return "ChannelMismatch";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::OutsideFloorplan: return "OutsideFloorplan";
    case ErrorCode::InvalidFloorplan: return "InvalidFloorplan";
    case ErrorCode::UnknownView: return "UnknownView";
    case ErrorCode::WrongPayloadSpace: return "WrongPayloadSpace";
    case ErrorCode::DegenerateArray: return "DegenerateArray";
    case ErrorCode::EmptyVolume: return "EmptyVolume";
    case ErrorCode::NonIntegralPeriod: return "NonIntegralPeriod";
    case ErrorCode::MalformedQuery: return "MalformedQuery";
    case ErrorCode::RunFinished: return "RunFinished";
  }
  return "Unknown";
}

}  // namespace tana
