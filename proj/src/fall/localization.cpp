#include "tana/fall/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tana/error.hpp"

namespace tana::fall {
namespace {

long cell_count(double lo, double hi, double res) {
  return std::max(1L, static_cast<long>(std::ceil((hi - lo) / res - 1e-9)));
}

}  // namespace

std::vector<double> predicted_offsets_us(std::span<const spaces::Vec3> mics, const spaces::Vec3& source,
                                         double speed_of_sound_mps) {
  std::vector<double> out(mics.size(), 0.0);
  if (mics.empty()) return out;
  const double d0 = spaces::distance(mics[0], source);
  for (std::size_t i = 1; i < mics.size(); ++i) {
    out[i] = (spaces::distance(mics[i], source) - d0) / speed_of_sound_mps * 1e6;
  }
  return out;
}

HeightEstimate estimate_source_height(std::span<const spaces::Vec3> mics, std::span<const double> offsets_us,
                                      double speed_of_sound_mps, const SearchVolume& volume,
                                      double grid_resolution_m) {
  if (mics.size() < 3) throw Error(ErrorCode::DegenerateArray, "need at least 3 microphones");
  for (std::size_t i = 0; i < mics.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (spaces::distance(mics[i], mics[j]) < 1e-9) {
        throw Error(ErrorCode::DegenerateArray,
                    "microphones " + std::to_string(j) + " and " + std::to_string(i) + " are collocated");
      }
    }
  }
  if (offsets_us.size() != mics.size()) {
    throw Error(ErrorCode::ChannelMismatch, "one offset per microphone expected");
  }
  const auto& lo = volume.min;
  const auto& hi = volume.max;
  if (!(hi.x > lo.x && hi.y > lo.y && hi.z > lo.z)) throw Error(ErrorCode::EmptyVolume, "search volume is empty");
  if (!(grid_resolution_m > 0.0) || !(speed_of_sound_mps > 0.0)) {
    throw Error(ErrorCode::EmptyVolume, "grid resolution and speed of sound must be positive");
  }

  const double res = grid_resolution_m;
  const long nx = cell_count(lo.x, hi.x, res);
  const long ny = cell_count(lo.y, hi.y, res);
  const long nz = cell_count(lo.z, hi.z, res);
  const std::size_t n = mics.size();
  const double us_per_m = 1e6 / speed_of_sound_mps;

  // Squared horizontal/vertical distance terms reused across the inner y loop.
  std::vector<double> dxz2(n);
  std::vector<double> d(n);

  double best = std::numeric_limits<double>::infinity();
  HeightEstimate estimate;
  for (long iz = 0; iz < nz; ++iz) {
    const double z = lo.z + (static_cast<double>(iz) + 0.5) * res;
    for (long ix = 0; ix < nx; ++ix) {
      const double x = lo.x + (static_cast<double>(ix) + 0.5) * res;
      for (std::size_t m = 0; m < n; ++m) {
        const double dx = x - mics[m].x;
        const double dz = z - mics[m].z;
        dxz2[m] = dx * dx + dz * dz;
      }
      for (long iy = 0; iy < ny; ++iy) {
        const double y = lo.y + (static_cast<double>(iy) + 0.5) * res;
        for (std::size_t m = 0; m < n; ++m) {
          const double dy = y - mics[m].y;
          d[m] = std::sqrt(dxz2[m] + dy * dy);
        }
        double sum = 0.0;
        for (std::size_t m = 1; m < n; ++m) {
          const double r = offsets_us[m] - (d[m] - d[0]) * us_per_m;
          sum += r * r;
        }
        if (sum < best) {
          best = sum;
          estimate.cell = {x, y, z};
        }
      }
    }
  }
  estimate.height_m = estimate.cell.z;
  estimate.residual_us = std::sqrt(best / static_cast<double>(n - 1));
  return estimate;
}

}  // namespace tana::fall
