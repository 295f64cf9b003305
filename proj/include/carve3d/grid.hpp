#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "carve3d/errors.hpp"

namespace carve3d {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::X, Axis::Y, Axis::Z};

constexpr int axis_index(Axis a) { return static_cast<int>(a); }
std::string_view axis_name(Axis a);

// (N_i, N_j, N_k). After permute_for_axis the third entry is the cutting axis.
using Dims = std::array<int, 3>;

// Dense 3D array, row-major with i slowest and k fastest, so a column (i, j)
// along k is contiguous.
template <typename Scalar>
class Grid3 {
 public:
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Grid3() = default;

  explicit Grid3(const Dims& dims, Scalar fill = Scalar(0))
      : dims_(checked(dims)), data_(Storage::Constant(cell_count(dims), fill)) {}

  Grid3(const Dims& dims, Storage data) : dims_(checked(dims)), data_(std::move(data)) {
    if (data_.size() != cell_count(dims_)) throw PreconditionError("grid payload size does not match dims");
  }

  const Dims& dims() const noexcept { return dims_; }
  int ni() const noexcept { return dims_[0]; }
  int nj() const noexcept { return dims_[1]; }
  int nk() const noexcept { return dims_[2]; }
  Eigen::Index size() const noexcept { return data_.size(); }

  Eigen::Index index(int i, int j, int k) const noexcept {
    return (Eigen::Index(i) * dims_[1] + j) * dims_[2] + k;
  }

  bool contains(int i, int j, int k) const noexcept {
    return i >= 0 && j >= 0 && k >= 0 && i < dims_[0] && j < dims_[1] && k < dims_[2];
  }

  Scalar operator()(int i, int j, int k) const noexcept { return data_[index(i, j, k)]; }
  Scalar& operator()(int i, int j, int k) noexcept { return data_[index(i, j, k)]; }

  auto column(int i, int j) const { return data_.segment(index(i, j, 0), dims_[2]); }
  auto column(int i, int j) { return data_.segment(index(i, j, 0), dims_[2]); }

  const Storage& data() const noexcept { return data_; }
  Storage& data() noexcept { return data_; }

  friend bool operator==(const Grid3& a, const Grid3& b) {
    return a.dims_ == b.dims_ && (a.data_ == b.data_).all();
  }

  static Eigen::Index cell_count(const Dims& d) { return Eigen::Index(d[0]) * d[1] * d[2]; }

 private:
  static Dims checked(const Dims& d) {
    if (d[0] < 0 || d[1] < 0 || d[2] < 0) throw PreconditionError("grid dims must be non-negative");
    return d;
  }

  Dims dims_{0, 0, 0};
  Storage data_;
};

// Moves `axis` to the cutting (third) index by a pairwise swap: X swaps
// (0, 2), Y swaps (1, 2), Z is the identity. Each swap is an involution, so
// the same call undoes it.
template <typename Scalar>
Grid3<Scalar> permute_for_axis(const Grid3<Scalar>& grid, Axis axis) {
  if (axis == Axis::Z) return grid;
  const int swapped = axis_index(axis);
  Dims out_dims = grid.dims();
  std::swap(out_dims[swapped], out_dims[2]);
  Grid3<Scalar> out(out_dims);
  for (int i = 0; i < grid.ni(); ++i) {
    for (int j = 0; j < grid.nj(); ++j) {
      for (int k = 0; k < grid.nk(); ++k) {
        std::array<int, 3> idx{i, j, k};
        std::swap(idx[swapped], idx[2]);
        out(idx[0], idx[1], idx[2]) = grid(i, j, k);
      }
    }
  }
  return out;
}

enum class GridKind : std::uint8_t { Occupancy = 0, Scalar = 1 };

// Occupancy grids hold {0, 1}; scalar grids hold signed distances (negative
// inside), bounded by |g| <= trunc when a truncation distance is set.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(GridKind kind, Grid3<float> values, std::optional<float> trunc = std::nullopt);

  static VoxelGrid occupancy(const Dims& dims) { return VoxelGrid(GridKind::Occupancy, Grid3<float>(dims)); }

  GridKind kind() const noexcept { return kind_; }
  bool is_occupancy() const noexcept { return kind_ == GridKind::Occupancy; }
  const std::optional<float>& trunc() const noexcept { return trunc_; }

  const Dims& dims() const noexcept { return values_.dims(); }
  float operator()(int i, int j, int k) const noexcept { return values_(i, j, k); }

  const Grid3<float>& values() const noexcept { return values_; }
  // Mutable access; call validate() afterwards if the invariants may be broken.
  Grid3<float>& values() noexcept { return values_; }

  void validate() const;

  friend bool operator==(const VoxelGrid& a, const VoxelGrid& b);

 private:
  GridKind kind_ = GridKind::Occupancy;
  Grid3<float> values_;
  std::optional<float> trunc_;
};

VoxelGrid permute_for_axis(const VoxelGrid& grid, Axis axis);

// o = 1 where g <= 0.
VoxelGrid occupancy_from_scalar(const VoxelGrid& grid);

// Occupancy view of any grid: identity for occupancy, sign test for scalar.
VoxelGrid as_occupancy(const VoxelGrid& grid);

// Truncated signed distance of an occupancy grid, negative inside. Each cell
// gets the distance to the nearest cell center of opposite occupancy minus
// half a voxel, clamped to [-tau, tau]; cells outside the grid are ignored.
VoxelGrid tsdf_from_occupancy(const VoxelGrid& occupancy, float tau);

long long occupied_count(const VoxelGrid& grid);

}  // namespace carve3d
