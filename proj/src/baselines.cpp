#include "carve3d/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace carve3d {

ScaleFactors sample_scale_factors(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  ScaleFactors f{};
  for (double& v : f) v = dist(rng);
  return f;
}

namespace {

// Nearest-neighbour source index for each of `out` cells resampling `in`.
std::vector<int> resample_map(int in, int out) {
  std::vector<int> map(out);
  for (int o = 0; o < out; ++o)
    map[o] = std::min(in - 1, static_cast<int>(std::floor((o + 0.5) * double(in) / double(out))));
  return map;
}

VoxelGrid gather(const VoxelGrid& grid, const std::array<std::vector<int>, 3>& maps) {
  const Dims out_dims{int(maps[0].size()), int(maps[1].size()), int(maps[2].size())};
  Grid3<float> out(out_dims);
  const auto& src = grid.values();
  for (int i = 0; i < out_dims[0]; ++i)
    for (int j = 0; j < out_dims[1]; ++j)
      for (int k = 0; k < out_dims[2]; ++k) out(i, j, k) = src(maps[0][i], maps[1][j], maps[2][k]);
  return VoxelGrid(grid.kind(), std::move(out), grid.trunc());
}

}  // namespace

VoxelGrid axis_scale(const VoxelGrid& grid, const ScaleFactors& factors) {
  std::array<std::vector<int>, 3> maps;
  for (int a = 0; a < 3; ++a) {
    if (!(factors[a] > 0.0) || !std::isfinite(factors[a])) throw PreconditionError("scale factors must be positive");
    const int n = grid.dims()[a];
    const int m = std::max(1, static_cast<int>(std::lround(n * factors[a])));
    maps[a] = n > 0 ? resample_map(n, m) : std::vector<int>{};
  }
  return gather(grid, maps);
}

std::vector<double> AxisWarp::knots() const {
  const double total = std::accumulate(factors.begin(), factors.end(), 0.0);
  std::vector<double> out(factors.size() + 1);
  out[0] = -1.0;
  for (std::size_t s = 0; s < factors.size(); ++s) out[s + 1] = out[s] + 2.0 * factors[s] / total;
  out.back() = 1.0;
  return out;
}

double AxisWarp::apply(double u) const {
  const int segments = static_cast<int>(factors.size());
  const double width = 2.0 / segments;
  const int s = std::clamp(static_cast<int>(std::floor((u + 1.0) / width)), 0, segments - 1);
  const double t = (u - (-1.0 + s * width)) / width;
  const auto k = knots();
  return k[s] + t * (k[s + 1] - k[s]);
}

double AxisWarp::inverse(double v) const {
  const int segments = static_cast<int>(factors.size());
  const auto k = knots();
  const int s = std::clamp(static_cast<int>(std::upper_bound(k.begin(), k.end(), v) - k.begin()) - 1, 0, segments - 1);
  const double t = (v - k[s]) / (k[s + 1] - k[s]);
  return -1.0 + (s + t) * 2.0 / segments;
}

bool AxisWarp::valid() const {
  if (factors.empty()) return false;
  for (double f : factors)
    if (!(f > 0.0) || !std::isfinite(f)) return false;
  if (mirrored)
    for (std::size_t s = 0; s < factors.size(); ++s)
      if (factors[s] != factors[factors.size() - 1 - s]) return false;
  return true;
}

WarpSpec identity_warp(int intervals) {
  if (intervals < 1) throw PreconditionError("warp needs at least one interval");
  WarpSpec spec;
  for (Axis a : kAxes)
    spec.axes[axis_index(a)] = AxisWarp{std::vector<double>(intervals, 1.0), a != Axis::Y};
  return spec;
}

WarpSpec sample_warp(Rng& rng, double sigma, int intervals) {
  if (!(sigma > 0.0)) throw PreconditionError("warp sigma must be positive");
  if (intervals < 1) throw PreconditionError("warp needs at least one interval");
  std::lognormal_distribution<double> dist(0.0, sigma);
  WarpSpec spec;
  for (Axis a : kAxes) {
    AxisWarp& w = spec.axes[axis_index(a)];
    w.mirrored = a != Axis::Y;
    w.factors.assign(intervals, 1.0);
    if (w.mirrored) {
      for (int s = 0; s < (intervals + 1) / 2; ++s) {
        const double f = dist(rng);
        w.factors[s] = f;
        w.factors[intervals - 1 - s] = f;
      }
    } else {
      for (double& f : w.factors) f = dist(rng);
    }
  }
  return spec;
}

std::vector<int> warp_index_map(const AxisWarp& warp, int n) {
  std::vector<int> map(n);
  auto source = [&](int o) {
    const double u = (2.0 * o + 1.0) / n - 1.0;
    const double v = warp.inverse(u);
    return std::clamp(static_cast<int>(std::floor((v + 1.0) / 2.0 * n)), 0, n - 1);
  };
  for (int o = 0; o < n; ++o) {
    // Mirrored warps are odd functions; evaluate the upper half and reflect
    // so the map is exactly antisymmetric.
    if (warp.mirrored && 2 * o + 1 < n) continue;
    map[o] = source(o);
  }
  if (warp.mirrored)
    for (int o = 0; 2 * o + 1 < n; ++o) map[o] = n - 1 - map[n - 1 - o];
  return map;
}

VoxelGrid piecewise_warp(const VoxelGrid& grid, const WarpSpec& spec) {
  std::array<std::vector<int>, 3> maps;
  for (int a = 0; a < 3; ++a) {
    if (!spec.axes[a].valid()) throw PreconditionError("invalid warp spec");
    maps[a] = warp_index_map(spec.axes[a], grid.dims()[a]);
  }
  return gather(grid, maps);
}

}  // namespace carve3d
