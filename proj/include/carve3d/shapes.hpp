#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "carve3d/grid.hpp"

namespace carve3d {

enum class ShapeKind { Box, Cylinder, Sphere, LBracket, Cup };

std::string_view shape_name(ShapeKind kind);
std::optional<ShapeKind> parse_shape(std::string_view name);

// Synthetic occupancy fixture in a side^3 grid. Round primitives are centered
// on (side - 1) / 2 so they are mirror-symmetric on every axis.
//
//   Box       extents (i, j, k); origin defaults to (side - extent) / 2
//   Cylinder  radius, height; axis along j
//   Sphere    radius
//   LBracket  extents = arm lengths (i, j-depth, k), thickness
//   Cup       radius, height, thickness (wall and floor); axis along j, open at high j
struct ShapeSpec {
  ShapeKind shape = ShapeKind::Box;
  int side = 8;
  std::array<int, 3> extents{4, 4, 4};
  std::optional<std::array<int, 3>> origin;
  int radius = 2;
  int height = 4;
  int thickness = 1;
};

VoxelGrid make_shape(const ShapeSpec& spec);

}  // namespace carve3d
