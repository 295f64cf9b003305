#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "carve3d/grid.hpp"

namespace carve3d {

// VGRID, little-endian:
//   "VGRD" | version u8 = 1 | dtype u8 (0 occupancy u8, 1 scalar f32) |
//   reserved u16 = 0 | N_i N_j N_k u32 | trunc f32 (NaN if unset) | payload
inline constexpr std::size_t kVgridHeaderSize = 24;

std::vector<unsigned char> encode_vgrid(const VoxelGrid& grid);
VoxelGrid decode_vgrid(const std::vector<unsigned char>& bytes);

VoxelGrid read_grid(const std::filesystem::path& path);
void write_grid(const VoxelGrid& grid, const std::filesystem::path& path);

// Plain text: "occ|sdf N_i N_j N_k [tau]" then one line of N_k values per
// (i, j) column. Floats use the shortest round-tripping representation.
void write_text_grid(const VoxelGrid& grid, std::ostream& out);
VoxelGrid read_text_grid(std::istream& in);

// Picks the format from the extension: ".txt" is text, anything else VGRID.
VoxelGrid load_grid_any(const std::filesystem::path& path);
void save_grid_any(const VoxelGrid& grid, const std::filesystem::path& path);

struct ObjStats {
  long long vertices = 0;
  long long faces = 0;
};

// One unit cube per occupied voxel with faces between two occupied cells
// culled; lattice vertices are shared. Scalar grids go through their sign
// occupancy.
ObjStats write_obj(const VoxelGrid& grid, std::ostream& out);
ObjStats export_obj(const VoxelGrid& grid, const std::filesystem::path& path);

}  // namespace carve3d
