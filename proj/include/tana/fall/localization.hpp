#pragma once

#include <span>
#include <vector>

#include "tana/spaces/types.hpp"

namespace tana::fall {

/// Axis-aligned box searched for a sound source. Cells are `resolution` wide starting at
/// `min`; the last cell on an axis may stick out past `max`.
struct SearchVolume {
  spaces::Vec3 min;
  spaces::Vec3 max;
};

struct HeightEstimate {
  double height_m = 0.0;
  double residual_us = 0.0;  // RMS over the offsets of mics 1..n-1
  spaces::Vec3 cell;         // arg-min cell centre
};

/// TDOA relative to microphone 0 predicted for a source at `source`, in microseconds.
std::vector<double> predicted_offsets_us(std::span<const spaces::Vec3> mics, const spaces::Vec3& source,
                                         double speed_of_sound_mps);

/// Exhaustive grid search minimizing the squared TDOA residual. Ties resolve to the lowest
/// z, then x, then y. Throws DegenerateArray, EmptyVolume or ChannelMismatch.
HeightEstimate estimate_source_height(std::span<const spaces::Vec3> mics, std::span<const double> offsets_us,
                                      double speed_of_sound_mps, const SearchVolume& volume,
                                      double grid_resolution_m);

}  // namespace tana::fall
