#pragma once

#include <array>
#include <vector>

#include "carve3d/grid.hpp"
#include "carve3d/rng.hpp"

namespace carve3d {

using ScaleFactors = std::array<double, 3>;

inline constexpr double kScaleMin = 0.75;
inline constexpr double kScaleMax = 1.25;

ScaleFactors sample_scale_factors(Rng& rng, double lo = kScaleMin, double hi = kScaleMax);

// Nearest-neighbour resample to round(N * f) cells per axis (at least 1).
VoxelGrid axis_scale(const VoxelGrid& grid, const ScaleFactors& factors);

// Piecewise-linear map of [-1, 1] onto itself. Sub-interval s has slope
// proportional to factors[s]; slopes are normalized so the endpoints stay
// fixed.
struct AxisWarp {
  std::vector<double> factors;
  bool mirrored = false;

  // Knot positions after normalization, size factors.size() + 1.
  std::vector<double> knots() const;
  double apply(double u) const;
  double inverse(double u) const;
  bool valid() const;
};

struct WarpSpec {
  std::array<AxisWarp, 3> axes;
};

WarpSpec identity_warp(int intervals = 6);

// Log-normal factors (underlying normal mean 0, std sigma). X and Z share
// factors between mirrored sub-intervals, so their warps are odd functions.
WarpSpec sample_warp(Rng& rng, double sigma = 0.25, int intervals = 6);

// Same dims; each cell samples the input at the inverse-warped coordinate.
VoxelGrid piecewise_warp(const VoxelGrid& grid, const WarpSpec& spec);

// Source index for every output index along one axis of extent n.
std::vector<int> warp_index_map(const AxisWarp& warp, int n);

}  // namespace carve3d
