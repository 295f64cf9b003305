#include "carve3d/symmetry.hpp"

#include <array>

namespace carve3d {

double mismatch_rate(const VoxelGrid& grid, Axis axis) {
  const VoxelGrid occ = as_occupancy(grid);
  const auto& o = occ.values();
  const int a = axis_index(axis);
  const Dims& d = o.dims();
  long long occupied = 0, empty = 0, miss_occupied = 0, miss_empty = 0;
  for (int i = 0; i < d[0]; ++i) {
    for (int j = 0; j < d[1]; ++j) {
      for (int k = 0; k < d[2]; ++k) {
        std::array<int, 3> m{i, j, k};
        m[a] = d[a] - 1 - m[a];
        const bool here = o(i, j, k) != 0.0f;
        const bool mismatch = here != (o(m[0], m[1], m[2]) != 0.0f);
        if (here) {
          ++occupied;
          miss_occupied += mismatch;
        } else {
          ++empty;
          miss_empty += mismatch;
        }
      }
    }
  }
  const double rate_o = occupied ? double(miss_occupied) / double(occupied) : 0.0;
  const double rate_u = empty ? double(miss_empty) / double(empty) : 0.0;
  if (rate_o + rate_u == 0.0) return 0.0;
  return 2.0 * rate_o * rate_u / (rate_o + rate_u);
}

SymmetryReport detect_symmetry(const VoxelGrid& grid, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw PreconditionError("symmetry threshold must lie in (0, 1)");
  const VoxelGrid occ = as_occupancy(grid);
  SymmetryReport report;
  for (Axis axis : kAxes) {
    report.rates[axis_index(axis)] = mismatch_rate(occ, axis);
    if (report.rates[axis_index(axis)] < threshold) report.symmetric_axes.push_back(axis);
  }
  return report;
}

Seam mirror_seam(const Seam& seam, Axis axis, int nk) {
  Seam out = seam;
  switch (axis) {
    case Axis::X:
      out.z = seam.z.colwise().reverse();
      break;
    case Axis::Y:
      out.z = seam.z.rowwise().reverse();
      break;
    case Axis::Z:
      out.z = (nk - 1) - seam.z;
      break;
  }
  return out;
}

Seam best_mirror_variant(const Seam& seam, const EnergyField& field, const std::vector<Axis>& symmetric_axes,
                         std::vector<Axis>* applied) {
  std::array<bool, 3> allowed{false, false, false};
  for (Axis a : symmetric_axes) allowed[axis_index(a)] = true;

  // Mirror subsets ordered by size, then X < Y < Z.
  static constexpr std::array<unsigned, 8> kMasks{0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};
  Seam best = seam;
  unsigned best_mask = 0;
  SeamCost best_cost = seam_cost(field, seam);
  for (unsigned mask : kMasks) {
    if (mask == 0) continue;
    bool usable = true;
    for (int a = 0; a < 3; ++a) usable = usable && (!(mask >> a & 1u) || allowed[a]);
    if (!usable) continue;
    Seam candidate = seam;
    for (Axis a : kAxes)
      if (mask >> axis_index(a) & 1u) candidate = mirror_seam(candidate, a, field.nk());
    const SeamCost cost = seam_cost(field, candidate);
    if (cost.total < best_cost.total) {
      best = std::move(candidate);
      best_cost = cost;
      best_mask = mask;
    }
  }
  if (applied) {
    applied->clear();
    for (Axis a : kAxes)
      if (best_mask >> axis_index(a) & 1u) applied->push_back(a);
  }
  best.cost_total = best_cost.total;
  best.cost_mean = best_cost.mean;
  return best;
}

}  // namespace carve3d
