#include "carve3d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carve3d {

std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::X:
      return "x";
    case Axis::Y:
      return "y";
    case Axis::Z:
      return "z";
  }
  return "?";
}

VoxelGrid::VoxelGrid(GridKind kind, Grid3<float> values, std::optional<float> trunc)
    : kind_(kind), values_(std::move(values)), trunc_(trunc) {
  validate();
}

void VoxelGrid::validate() const {
  if (kind_ == GridKind::Occupancy) {
    if (trunc_) throw PreconditionError("occupancy grids carry no truncation distance");
    if (!((values_.data() == 0.0f) || (values_.data() == 1.0f)).all())
      throw PreconditionError("occupancy values must be 0 or 1");
    return;
  }
  if (!values_.data().isFinite().all()) throw PreconditionError("scalar grid contains non-finite values");
  if (trunc_) {
    if (!(*trunc_ > 0.0f)) throw PreconditionError("truncation distance must be positive");
    if (values_.size() > 0 && values_.data().abs().maxCoeff() > *trunc_)
      throw PreconditionError("scalar value exceeds truncation distance");
  }
}

bool operator==(const VoxelGrid& a, const VoxelGrid& b) {
  return a.kind_ == b.kind_ && a.trunc_ == b.trunc_ && a.values_ == b.values_;
}

VoxelGrid permute_for_axis(const VoxelGrid& grid, Axis axis) {
  return VoxelGrid(grid.kind(), permute_for_axis(grid.values(), axis), grid.trunc());
}

VoxelGrid occupancy_from_scalar(const VoxelGrid& grid) {
  if (grid.is_occupancy()) throw PreconditionError("occupancy_from_scalar expects a scalar grid");
  Grid3<float> occ(grid.dims(), (grid.values().data() <= 0.0f).cast<float>());
  return VoxelGrid(GridKind::Occupancy, std::move(occ));
}

VoxelGrid as_occupancy(const VoxelGrid& grid) {
  return grid.is_occupancy() ? grid : occupancy_from_scalar(grid);
}

VoxelGrid tsdf_from_occupancy(const VoxelGrid& occupancy, float tau) {
  if (!occupancy.is_occupancy()) throw PreconditionError("tsdf_from_occupancy expects an occupancy grid");
  if (!(tau > 0.0f)) throw PreconditionError("tau must be positive");
  const auto& occ = occupancy.values();
  const int reach = static_cast<int>(std::ceil(tau)) + 1;
  Grid3<float> out(occ.dims());
  for (int i = 0; i < occ.ni(); ++i) {
    for (int j = 0; j < occ.nj(); ++j) {
      for (int k = 0; k < occ.nk(); ++k) {
        const bool inside = occ(i, j, k) != 0.0f;
        int best_sq = std::numeric_limits<int>::max();
        for (int di = -reach; di <= reach; ++di) {
          for (int dj = -reach; dj <= reach; ++dj) {
            for (int dk = -reach; dk <= reach; ++dk) {
              const int a = i + di, b = j + dj, c = k + dk;
              if (!occ.contains(a, b, c) || (occ(a, b, c) != 0.0f) == inside) continue;
              best_sq = std::min(best_sq, di * di + dj * dj + dk * dk);
            }
          }
        }
        float d = tau;
        if (best_sq != std::numeric_limits<int>::max())
          d = std::min(tau, static_cast<float>(std::sqrt(double(best_sq)) - 0.5));
        out(i, j, k) = inside ? -d : d;
      }
    }
  }
  return VoxelGrid(GridKind::Scalar, std::move(out), tau);
}

long long occupied_count(const VoxelGrid& grid) {
  if (grid.is_occupancy()) return static_cast<long long>((grid.values().data() != 0.0f).count());
  return static_cast<long long>((grid.values().data() <= 0.0f).count());
}

}  // namespace carve3d
