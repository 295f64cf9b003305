#pragma once

#include <Eigen/Core>

namespace carve3d {

using IndexMap = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A path through a 2D energy map: one cutting-axis index per main-axis row,
// passing through (anchor_row, anchor_col).
struct Path2D {
  Eigen::ArrayXi values;
  int anchor_row = 0;
  int anchor_col = 0;
  double cost = 0.0;
};

// Seam surface: z(i, j) is the cutting-axis index removed or duplicated in
// column (i, j).
struct Seam {
  IndexMap z;
  double cost_total = 0.0;
  double cost_mean = 0.0;

  int ni() const { return static_cast<int>(z.rows()); }
  int nj() const { return static_cast<int>(z.cols()); }
};

// Unit-step continuity and range checks.
bool is_valid_path(const Path2D& path, int width);
bool is_valid_seam(const Seam& seam, int nk);

inline Seam constant_seam(int ni, int nj, int z) {
  return Seam{IndexMap::Constant(ni, nj, z), 0.0, 0.0};
}

}  // namespace carve3d
