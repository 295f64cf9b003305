#pragma once

#include <Eigen/Core>

#include <cmath>

#include "carve3d/grid.hpp"
#include "carve3d/seam.hpp"

namespace carve3d {

using EnergyField = Grid3<double>;

// Rows are the main axis, columns the cutting axis.
using EnergyMap2D = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Axial: |forward difference| along the cutting axis only.
// Full: sum of |forward difference| along all three axes.
// The last layer on each differenced axis contributes 0.
enum class EnergyKind { Axial, Full };

template <typename Scalar>
EnergyField compute_energy(const Grid3<Scalar>& grid, EnergyKind kind = EnergyKind::Axial) {
  EnergyField out(grid.dims());
  const int ni = grid.ni(), nj = grid.nj(), nk = grid.nk();
  for (int i = 0; i < ni; ++i) {
    for (int j = 0; j < nj; ++j) {
      const auto col = grid.column(i, j);
      auto dst = out.column(i, j);
      for (int k = 0; k + 1 < nk; ++k) dst[k] = std::abs(double(col[k + 1]) - double(col[k]));
      if (nk > 0) dst[nk - 1] = 0.0;
      if (kind == EnergyKind::Full) {
        if (j + 1 < nj) {
          const auto next = grid.column(i, j + 1);
          for (int k = 0; k < nk; ++k) dst[k] += std::abs(double(next[k]) - double(col[k]));
        }
        if (i + 1 < ni) {
          const auto next = grid.column(i + 1, j);
          for (int k = 0; k < nk; ++k) dst[k] += std::abs(double(next[k]) - double(col[k]));
        }
      }
    }
  }
  return out;
}

EnergyField compute_energy(const VoxelGrid& grid, EnergyKind kind = EnergyKind::Axial);

// Sums the field over `reducing` (X or Y); the cutting axis is never reduced.
EnergyMap2D reduce_over_axis(const EnergyField& field, Axis reducing);

struct SeamCost {
  double total = 0.0;
  double mean = 0.0;
};

SeamCost seam_cost(const EnergyField& field, const Seam& seam);

double mean_energy(const EnergyField& field);

// Mean-cost ceiling for accepting a seam, given the grid's mean energy.
double seam_filter_threshold(double mean_energy);

}  // namespace carve3d
