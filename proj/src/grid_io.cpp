#include "carve3d/grid_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace carve3d {

namespace {

constexpr char kMagic[4] = {'V', 'G', 'R', 'D'};
constexpr std::uint8_t kVersion = 1;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

std::uint32_t get_u32(const std::vector<unsigned char>& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= std::uint32_t(in[at + b]) << (8 * b);
  return v;
}

}  // namespace

std::vector<unsigned char> encode_vgrid(const VoxelGrid& grid) {
  const auto& d = grid.dims();
  const auto& data = grid.values().data();
  const bool occ = grid.is_occupancy();
  std::vector<unsigned char> out;
  out.reserve(kVgridHeaderSize + data.size() * (occ ? 1 : 4));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kVersion);
  out.push_back(occ ? 0 : 1);
  out.push_back(0);
  out.push_back(0);
  for (int a = 0; a < 3; ++a) put_u32(out, static_cast<std::uint32_t>(d[a]));
  const float trunc = grid.trunc() ? *grid.trunc() : std::numeric_limits<float>::quiet_NaN();
  put_u32(out, std::bit_cast<std::uint32_t>(trunc));
  for (Eigen::Index c = 0; c < data.size(); ++c) {
    if (occ) {
      out.push_back(data[c] != 0.0f ? 1 : 0);
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(data[c]));
    }
  }
  return out;
}

VoxelGrid decode_vgrid(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kVgridHeaderSize) throw FormatError("truncated VGRID header", bytes.size());
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad VGRID magic", 0);
  if (bytes[4] != kVersion) throw FormatError("unsupported VGRID version " + std::to_string(bytes[4]), 4);
  const std::uint8_t dtype = bytes[5];
  if (dtype > 1) throw FormatError("unknown VGRID dtype " + std::to_string(dtype), 5);
  if (bytes[6] != 0 || bytes[7] != 0) throw FormatError("reserved VGRID field is not zero", 6);

  Dims dims{};
  for (int a = 0; a < 3; ++a) {
    const std::uint32_t v = get_u32(bytes, 8 + 4 * a);
    if (v > static_cast<std::uint32_t>(std::numeric_limits<int>::max()))
      throw FormatError("VGRID dimension too large", 8 + 4 * a);
    dims[a] = static_cast<int>(v);
  }
  const float trunc_raw = std::bit_cast<float>(get_u32(bytes, 20));
  const std::size_t cells = static_cast<std::size_t>(Grid3<float>::cell_count(dims));
  const std::size_t width = dtype == 0 ? 1 : 4;
  const std::size_t expected = kVgridHeaderSize + cells * width;
  if (bytes.size() < expected) throw FormatError("truncated VGRID payload", bytes.size());
  if (bytes.size() > expected) throw FormatError("trailing bytes after VGRID payload", expected);

  Grid3<float> values(dims);
  auto& data = values.data();
  for (std::size_t c = 0; c < cells; ++c) {
    const std::size_t at = kVgridHeaderSize + c * width;
    if (dtype == 0) {
      if (bytes[at] > 1) throw FormatError("occupancy value is not 0 or 1", at);
      data[c] = bytes[at];
    } else {
      data[c] = std::bit_cast<float>(get_u32(bytes, at));
    }
  }
  std::optional<float> trunc;
  if (!std::isnan(trunc_raw)) trunc = trunc_raw;
  try {
    return VoxelGrid(dtype == 0 ? GridKind::Occupancy : GridKind::Scalar, std::move(values), trunc);
  } catch (const PreconditionError& e) {
    throw FormatError(e.what(), kVgridHeaderSize);
  }
}

VoxelGrid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_vgrid(bytes);
}

void write_grid(const VoxelGrid& grid, const std::filesystem::path& path) {
  const auto bytes = encode_vgrid(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::string format_float(float v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

float parse_float(const std::string& token, std::size_t position) {
  float v = 0.0f;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw FormatError("bad number '" + token + "'", position);
  return v;
}

}  // namespace

void write_text_grid(const VoxelGrid& grid, std::ostream& out) {
  const auto& d = grid.dims();
  const bool occ = grid.is_occupancy();
  out << (occ ? "occ" : "sdf") << ' ' << d[0] << ' ' << d[1] << ' ' << d[2];
  if (grid.trunc()) out << ' ' << format_float(*grid.trunc());
  out << '\n';
  const auto& g = grid.values();
  for (int i = 0; i < d[0]; ++i) {
    for (int j = 0; j < d[1]; ++j) {
      for (int k = 0; k < d[2]; ++k) {
        if (k) out << ' ';
        if (occ) {
          out << (g(i, j, k) != 0.0f ? '1' : '0');
        } else {
          out << format_float(g(i, j, k));
        }
      }
      out << '\n';
    }
  }
}

VoxelGrid read_text_grid(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FormatError("missing text grid header", 0);
  std::istringstream hs(header);
  std::string kind;
  long long n[3] = {-1, -1, -1};
  hs >> kind >> n[0] >> n[1] >> n[2];
  if (!hs || (kind != "occ" && kind != "sdf")) throw FormatError("bad text grid header", 0);
  for (long long v : n)
    if (v < 0 || v > std::numeric_limits<int>::max()) throw FormatError("bad text grid dimension", 0);
  std::optional<float> trunc;
  std::string tau;
  if (hs >> tau) {
    if (kind == "occ") throw FormatError("occupancy header takes no tau", 0);
    trunc = parse_float(tau, 0);
  }
  const Dims dims{int(n[0]), int(n[1]), int(n[2])};
  Grid3<float> values(dims);
  auto& data = values.data();
  std::string token;
  for (Eigen::Index c = 0; c < data.size(); ++c) {
    const auto pos = static_cast<std::size_t>(std::max<std::streamoff>(0, in.tellg()));
    if (!(in >> token)) throw FormatError("truncated text grid payload", pos);
    data[c] = parse_float(token, pos);
  }
  if (in >> token) throw FormatError("trailing values after text grid payload", 0);
  try {
    return VoxelGrid(kind == "occ" ? GridKind::Occupancy : GridKind::Scalar, std::move(values), trunc);
  } catch (const PreconditionError& e) {
    throw FormatError(e.what(), header.size());
  }
}

namespace {

bool is_text_path(const std::filesystem::path& path) { return path.extension() == ".txt"; }

}  // namespace

VoxelGrid load_grid_any(const std::filesystem::path& path) {
  if (!is_text_path(path)) return read_grid(path);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_text_grid(in);
}

void save_grid_any(const VoxelGrid& grid, const std::filesystem::path& path) {
  if (!is_text_path(path)) return write_grid(grid, path);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_text_grid(grid, out);
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

// Corners of each face in outward counter-clockwise order, as (di, dj, dk).
constexpr int kFaceCorners[6][4][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {0, 1, 0}},  // -i
    {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}},  // +i
    {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}},  // -j
    {{0, 1, 0}, {0, 1, 1}, {1, 1, 1}, {1, 1, 0}},  // +j
    {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}},  // -k
    {{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}},  // +k
};
constexpr int kFaceNeighbor[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};

}  // namespace

ObjStats write_obj(const VoxelGrid& grid, std::ostream& out) {
  const VoxelGrid occ = as_occupancy(grid);
  const auto& g = occ.values();
  const long long sj = g.nj() + 1, sk = g.nk() + 1;

  std::unordered_map<long long, long long> vertex_ids;
  std::ostringstream vertices, faces;
  ObjStats stats;
  auto vertex = [&](int i, int j, int k) {
    const long long key = (i * sj + j) * sk + k;
    auto [it, inserted] = vertex_ids.try_emplace(key, stats.vertices + 1);
    if (inserted) {
      ++stats.vertices;
      vertices << "v " << i << ' ' << j << ' ' << k << '\n';
    }
    return it->second;
  };

  for (int i = 0; i < g.ni(); ++i) {
    for (int j = 0; j < g.nj(); ++j) {
      for (int k = 0; k < g.nk(); ++k) {
        if (g(i, j, k) == 0.0f) continue;
        for (int f = 0; f < 6; ++f) {
          const int a = i + kFaceNeighbor[f][0], b = j + kFaceNeighbor[f][1], c = k + kFaceNeighbor[f][2];
          if (g.contains(a, b, c) && g(a, b, c) != 0.0f) continue;
          faces << 'f';
          for (const auto& corner : kFaceCorners[f]) faces << ' ' << vertex(i + corner[0], j + corner[1], k + corner[2]);
          faces << '\n';
          ++stats.faces;
        }
      }
    }
  }
  out << "# carve3d voxel export: " << stats.vertices << " vertices, " << stats.faces << " faces\n";
  out << vertices.str() << faces.str();
  return stats;
}

ObjStats export_obj(const VoxelGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const auto stats = write_obj(grid, out);
  if (!out) throw IoError("write failed for " + path.string());
  return stats;
}

}  // namespace carve3d
