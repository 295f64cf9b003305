#include "carve3d/shapes.hpp"

#include <string>

namespace carve3d {

std::string_view shape_name(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Box:
      return "box";
    case ShapeKind::Cylinder:
      return "cylinder";
    case ShapeKind::Sphere:
      return "sphere";
    case ShapeKind::LBracket:
      return "lbracket";
    case ShapeKind::Cup:
      return "cup";
  }
  return "?";
}

std::optional<ShapeKind> parse_shape(std::string_view name) {
  for (auto kind : {ShapeKind::Box, ShapeKind::Cylinder, ShapeKind::Sphere, ShapeKind::LBracket, ShapeKind::Cup})
    if (shape_name(kind) == name) return kind;
  return std::nullopt;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SpecError(what);
}

// Offset that centers an extent of `e` cells in `side`.
int centered(int side, int e) { return (side - e) / 2; }

void fill_box(Grid3<float>& g, std::array<int, 3> lo, std::array<int, 3> hi) {
  for (int i = lo[0]; i < hi[0]; ++i)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int k = lo[2]; k < hi[2]; ++k) g(i, j, k) = 1.0f;
}

}  // namespace

VoxelGrid make_shape(const ShapeSpec& spec) {
  const int side = spec.side;
  require(side >= 1, "grid side must be positive");
  Grid3<float> g({side, side, side});
  const double c = (side - 1) / 2.0;

  switch (spec.shape) {
    case ShapeKind::Box: {
      const auto& e = spec.extents;
      std::array<int, 3> lo{};
      for (int a = 0; a < 3; ++a) {
        require(e[a] >= 1 && e[a] <= side, "box extent does not fit the grid");
        lo[a] = spec.origin ? (*spec.origin)[a] : centered(side, e[a]);
        require(lo[a] >= 0 && lo[a] + e[a] <= side, "box exceeds the grid");
      }
      fill_box(g, lo, {lo[0] + e[0], lo[1] + e[1], lo[2] + e[2]});
      break;
    }
    case ShapeKind::Cylinder: {
      require(spec.radius >= 0 && 2 * spec.radius + 1 <= side, "cylinder radius exceeds the grid");
      require(spec.height >= 1 && spec.height <= side, "cylinder height exceeds the grid");
      const int j0 = centered(side, spec.height);
      const double r2 = double(spec.radius) * spec.radius;
      for (int i = 0; i < side; ++i)
        for (int k = 0; k < side; ++k)
          if ((i - c) * (i - c) + (k - c) * (k - c) <= r2)
            for (int j = j0; j < j0 + spec.height; ++j) g(i, j, k) = 1.0f;
      break;
    }
    case ShapeKind::Sphere: {
      require(spec.radius >= 0 && 2 * spec.radius + 1 <= side, "sphere radius exceeds the grid");
      const double r2 = double(spec.radius) * spec.radius;
      for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
          for (int k = 0; k < side; ++k)
            if ((i - c) * (i - c) + (j - c) * (j - c) + (k - c) * (k - c) <= r2) g(i, j, k) = 1.0f;
      break;
    }
    case ShapeKind::LBracket: {
      const auto& e = spec.extents;
      const int t = spec.thickness;
      for (int a = 0; a < 3; ++a) require(e[a] >= 1 && e[a] <= side, "bracket extent does not fit the grid");
      require(t >= 1 && t <= e[0] && t <= e[2], "bracket thickness exceeds its arms");
      const std::array<int, 3> lo{centered(side, e[0]), centered(side, e[1]), centered(side, e[2])};
      // Horizontal arm along i at the bottom of k, vertical arm along k at low i.
      fill_box(g, lo, {lo[0] + e[0], lo[1] + e[1], lo[2] + t});
      fill_box(g, lo, {lo[0] + t, lo[1] + e[1], lo[2] + e[2]});
      break;
    }
    case ShapeKind::Cup: {
      require(spec.radius >= 1 && 2 * spec.radius + 1 <= side, "cup radius exceeds the grid");
      require(spec.height >= 1 && spec.height <= side, "cup height exceeds the grid");
      require(spec.thickness >= 1 && spec.thickness <= spec.radius && spec.thickness <= spec.height,
              "cup thickness exceeds its radius or height");
      const int j0 = centered(side, spec.height);
      const double outer2 = double(spec.radius) * spec.radius;
      const double inner = spec.radius - spec.thickness;
      for (int i = 0; i < side; ++i) {
        for (int k = 0; k < side; ++k) {
          const double d2 = (i - c) * (i - c) + (k - c) * (k - c);
          if (d2 > outer2) continue;
          const bool wall = d2 > inner * inner;
          for (int j = j0; j < j0 + spec.height; ++j)
            if (wall || j < j0 + spec.thickness) g(i, j, k) = 1.0f;
        }
      }
      break;
    }
  }
  return VoxelGrid(GridKind::Occupancy, std::move(g));
}

}  // namespace carve3d
