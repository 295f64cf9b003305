#include <doctest.h>

#include "carve3d/shapes.hpp"
#include "carve3d/symmetry.hpp"
#include "oracles.hpp"

using namespace carve3d;

TEST_CASE("box: 4^3 in 8^3") {
  ShapeSpec s;
  s.shape = ShapeKind::Box;
  s.side = 8;
  s.extents = {4, 4, 4};
  const VoxelGrid g = make_shape(s);
  CHECK(g.dims() == Dims{8, 8, 8});
  CHECK(occupied_count(g) == 64);
  CHECK(oracle::is_solid_box(g));
  std::array<int, 3> lo, hi;
  oracle::occupied_bounds(g, lo, hi);
  CHECK(lo == std::array<int, 3>{2, 2, 2});
  CHECK(hi == std::array<int, 3>{5, 5, 5});
}

TEST_CASE("box with explicit origin") {
  ShapeSpec s;
  s.side = 10;
  s.extents = {2, 3, 4};
  s.origin = std::array<int, 3>{0, 1, 6};
  const VoxelGrid g = make_shape(s);
  std::array<int, 3> lo, hi;
  REQUIRE(oracle::occupied_bounds(g, lo, hi));
  CHECK(lo == std::array<int, 3>{0, 1, 6});
  CHECK(hi == std::array<int, 3>{1, 3, 9});
  CHECK(oracle::is_solid_box(g));
}

TEST_CASE("shapes that do not fit throw") {
  ShapeSpec s;
  s.side = 8;
  s.extents = {9, 1, 1};
  CHECK_THROWS_AS(make_shape(s), SpecError);
  s.extents = {4, 4, 4};
  s.origin = std::array<int, 3>{5, 0, 0};
  CHECK_THROWS_AS(make_shape(s), SpecError);
  ShapeSpec c;
  c.shape = ShapeKind::Cylinder;
  c.side = 8;
  c.radius = 4;
  CHECK_THROWS_AS(make_shape(c), SpecError);
  c.radius = 2;
  c.height = 9;
  CHECK_THROWS_AS(make_shape(c), SpecError);
}

TEST_CASE("sphere radius 0 is the centre voxel") {
  ShapeSpec s;
  s.shape = ShapeKind::Sphere;
  s.side = 7;
  s.radius = 0;
  const VoxelGrid g = make_shape(s);
  CHECK(occupied_count(g) == 1);
  CHECK(g(3, 3, 3) == 1.0f);
}

TEST_CASE("cylinder count matches a brute-force disk count") {
  for (auto [side, r, h] : {std::array<int, 3>{16, 5, 9}, {17, 6, 4}, {64, 12, 40}}) {
    ShapeSpec s;
    s.shape = ShapeKind::Cylinder;
    s.side = side;
    s.radius = r;
    s.height = h;
    const VoxelGrid g = make_shape(s);
    const double c = (side - 1) / 2.0;
    long long disk = 0;
    for (int i = 0; i < side; ++i)
      for (int k = 0; k < side; ++k) disk += (i - c) * (i - c) + (k - c) * (k - c) <= double(r) * r;
    CHECK(occupied_count(g) == h * disk);
  }
}

TEST_CASE("round shapes are mirror-symmetric on every axis") {
  for (ShapeKind kind : {ShapeKind::Sphere, ShapeKind::Cylinder, ShapeKind::Cup}) {
    ShapeSpec s;
    s.shape = kind;
    s.side = 16;
    s.radius = 5;
    s.height = 8;
    s.thickness = 2;
    const VoxelGrid g = make_shape(s);
    CHECK(mismatch_rate(g, Axis::X) == 0.0);
    CHECK(mismatch_rate(g, Axis::Z) == 0.0);
    if (kind == ShapeKind::Cup) {
      CHECK(mismatch_rate(g, Axis::Y) > 0.0);
    } else {
      CHECK(mismatch_rate(g, Axis::Y) == 0.0);
    }
  }
}

TEST_CASE("l-bracket and cup are single components") {
  ShapeSpec b;
  b.shape = ShapeKind::LBracket;
  b.side = 16;
  b.extents = {10, 6, 10};
  b.thickness = 3;
  const VoxelGrid lb = make_shape(b);
  CHECK(oracle::component_count(lb.dims(), [&](int i, int j, int k) { return lb(i, j, k) != 0.0f; }) == 1);
  // two 10x6x3 arms overlapping in a 3x6x3 block
  CHECK(occupied_count(lb) == 2 * 10 * 6 * 3 - 3 * 6 * 3);

  ShapeSpec c;
  c.shape = ShapeKind::Cup;
  c.side = 16;
  c.radius = 6;
  c.height = 10;
  c.thickness = 2;
  const VoxelGrid cup = make_shape(c);
  CHECK(oracle::component_count(cup.dims(), [&](int i, int j, int k) { return cup(i, j, k) != 0.0f; }) == 1);
  // the centre column is open above the floor
  CHECK(cup(7, 3 + 1, 7) == 1.0f);
  CHECK(cup(7, 3 + 5, 7) == 0.0f);
}

TEST_CASE("shape names round trip") {
  for (ShapeKind kind : {ShapeKind::Box, ShapeKind::Cylinder, ShapeKind::Sphere, ShapeKind::LBracket, ShapeKind::Cup})
    CHECK(parse_shape(shape_name(kind)) == kind);
  CHECK_FALSE(parse_shape("torus").has_value());
}

TEST_CASE("make_shape is deterministic") {
  ShapeSpec s;
  s.shape = ShapeKind::Cylinder;
  s.side = 32;
  s.radius = 7;
  s.height = 20;
  CHECK(make_shape(s) == make_shape(s));
}
