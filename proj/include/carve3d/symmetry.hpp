#pragma once

#include <array>
#include <vector>

#include "carve3d/energy.hpp"
#include "carve3d/grid.hpp"
#include "carve3d/seam.hpp"

namespace carve3d {

struct SymmetryReport {
  std::array<double, 3> rates{0.0, 0.0, 0.0};
  std::vector<Axis> symmetric_axes;

  double rate(Axis a) const { return rates[axis_index(a)]; }
};

// Harmonic mean of the occupied and unoccupied XOR-mismatch fractions between
// the grid and its mirror image on `axis`. 0/0 sides count as 0. Scalar grids
// are tested through their sign occupancy.
double mismatch_rate(const VoxelGrid& grid, Axis axis);

// Axis is symmetric when its rate is strictly below `threshold`.
SymmetryReport detect_symmetry(const VoxelGrid& grid, double threshold);

// X and Y mirror the seam's first and second index; Z mirrors the cutting
// index itself (nk is the cutting extent).
Seam mirror_seam(const Seam& seam, Axis axis, int nk);

// Cheapest seam over every mirror combination of `symmetric_axes`. Ties keep
// the unmirrored seam, then fewer mirrors, then X < Y < Z order. The mirrors
// applied to the winner are written to `applied` when given.
Seam best_mirror_variant(const Seam& seam, const EnergyField& field, const std::vector<Axis>& symmetric_axes,
                         std::vector<Axis>* applied = nullptr);

}  // namespace carve3d
