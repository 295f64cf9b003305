#include "carve3d/energy.hpp"

#include <string>

namespace carve3d {

EnergyField compute_energy(const VoxelGrid& grid, EnergyKind kind) { return compute_energy(grid.values(), kind); }

EnergyMap2D reduce_over_axis(const EnergyField& field, Axis reducing) {
  if (reducing == Axis::Z) throw PreconditionError("the cutting axis cannot be reduced");
  const int ni = field.ni(), nj = field.nj(), nk = field.nk();
  if (reducing == Axis::X) {
    EnergyMap2D out = EnergyMap2D::Zero(nj, nk);
    for (int i = 0; i < ni; ++i)
      for (int j = 0; j < nj; ++j) out.row(j) += field.column(i, j).transpose();
    return out;
  }
  EnergyMap2D out = EnergyMap2D::Zero(ni, nk);
  for (int i = 0; i < ni; ++i)
    for (int j = 0; j < nj; ++j) out.row(i) += field.column(i, j).transpose();
  return out;
}

SeamCost seam_cost(const EnergyField& field, const Seam& seam) {
  if (seam.ni() != field.ni() || seam.nj() != field.nj())
    throw PreconditionError("seam dims do not match the energy field");
  double total = 0.0;
  for (int i = 0; i < field.ni(); ++i) {
    for (int j = 0; j < field.nj(); ++j) {
      const int z = seam.z(i, j);
      if (z < 0 || z >= field.nk())
        throw BoundsError("seam index " + std::to_string(z) + " outside [0, " + std::to_string(field.nk()) + ")");
      total += field(i, j, z);
    }
  }
  const double cells = double(field.ni()) * field.nj();
  return {total, cells > 0 ? total / cells : 0.0};
}

double mean_energy(const EnergyField& field) {
  if (field.size() == 0) return 0.0;
  return field.data().sum() / double(field.size());
}

double seam_filter_threshold(double e_avg) { return e_avg > 4e-4 ? e_avg * 0.25 : 1e-4; }

}  // namespace carve3d
