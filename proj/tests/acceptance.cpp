// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "carve3d/baselines.hpp"
#include "carve3d/beam_search.hpp"
#include "carve3d/carve.hpp"
#include "carve3d/cli.hpp"
#include "carve3d/energy.hpp"
#include "carve3d/grid_io.hpp"
#include "carve3d/shapes.hpp"
#include "carve3d/symmetry.hpp"
#include "oracles.hpp"

using namespace carve3d;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Pinned fixtures.
constexpr int kCylinder64Radius = 12, kCylinder64Height = 40;
constexpr int kCylinder128Radius = 24, kCylinder128Height = 80;
constexpr std::uint64_t kDiversitySeeds[8] = {0, 1, 2, 3, 4, 5, 6, 7};

VoxelGrid cylinder(int side, int radius, int height) {
  ShapeSpec s;
  s.shape = ShapeKind::Cylinder;
  s.side = side;
  s.radius = radius;
  s.height = height;
  return make_shape(s);
}

// Hand-written references for replaying a step log.
double oracle_threshold(double e_avg) { return e_avg > 0.0004 ? 0.25 * e_avg : 0.0001; }

EnergyField oracle_axial_energy(const VoxelGrid& g) {
  const Dims d = g.dims();
  EnergyField e(d);
  for (int i = 0; i < d[0]; ++i)
    for (int j = 0; j < d[1]; ++j)
      for (int k = 0; k + 1 < d[2]; ++k) e(i, j, k) = std::abs(double(g(i, j, k + 1)) - double(g(i, j, k)));
  return e;
}

VoxelGrid oracle_apply(const VoxelGrid& g, const IndexMap& z, Direction dir) {
  const Dims d = g.dims();
  const int nk = d[2] + (dir == Direction::Insert ? 1 : -1);
  Grid3<float> out({d[0], d[1], nk});
  for (int i = 0; i < d[0]; ++i)
    for (int j = 0; j < d[1]; ++j) {
      std::vector<float> col;
      for (int k = 0; k < d[2]; ++k) {
        if (dir == Direction::Remove && k == z(i, j)) continue;
        col.push_back(g(i, j, k));
        if (dir == Direction::Insert && k == z(i, j)) col.push_back(g(i, j, k));
      }
      for (int k = 0; k < nk; ++k) out(i, j, k) = col[k];
    }
  return VoxelGrid(g.kind(), out, g.trunc());
}

// Replays an occupancy run from its step log, re-deriving every seam cost and
// threshold; returns the reconstructed output grid.
VoxelGrid replay(const VoxelGrid& input, const AugmentResult& r, Outcome& o, const std::string& tag) {
  VoxelGrid g = input;
  for (std::size_t s = 0; s < r.steps.size(); ++s) {
    const StepLog& log = r.steps[s];
    VoxelGrid work = permute_for_axis(g, log.axis);
    const EnergyField e = oracle_axial_energy(work);
    double total = 0.0;
    for (Eigen::Index c = 0; c < e.size(); ++c) total += e.data()[c];
    const double t_c = oracle_threshold(total / double(e.size()));
    const Dims d = work.dims();
    const std::string where = tag + fmt(" step %zu", s);
    o.require(log.seam.ni() == d[0] && log.seam.nj() == d[1], where + ": seam shape");
    if (!o.pass) return g;
    o.require(oracle::seam_continuous(log.seam.z, d[2]), where + ": seam not continuous");
    const double mean = oracle::naive_seam_sum(e, log.seam.z) / double(d[0] * d[1]);
    o.require(std::abs(mean - log.seam_mean_cost) <= 1e-12, where + ": logged cost differs from recomputed");
    o.require(log.threshold == t_c, where + ": logged threshold differs from recomputed");
    o.require(log.accepted == (mean <= t_c), where + ": acceptance disagrees with the filter");
    if (log.accepted) work = oracle_apply(work, log.seam.z, log.direction);
    g = permute_for_axis(work, log.axis);
  }
  return g;
}

// 1. beam search against exhaustive enumeration
Outcome criterion1() {
  Outcome o;
  std::mt19937_64 rng(1001);
  int matched = 0;
  double secs = 0.0, oracle_secs = 0.0;
  for (int m = 0; m < 50; ++m) {
    const EnergyMap2D map = oracle::random_map(8, 8, rng);
    const int ar = int(rng() % 8), ac = int(rng() % 8);
    auto t0 = Clock::now();
    const double best = oracle::enumerate_min_path(map, ar, ac);
    oracle_secs += seconds_since(t0);
    t0 = Clock::now();
    const Path2D wide = beam_search_2d(map, ar, ac, {2187, 0.0});
    const Path2D narrow = beam_search_2d(map, ar, ac, {4, 0.0});
    secs += seconds_since(t0);
    o.require(wide.cost == best, fmt("map %d: n=3^7 cost %g vs %g", m, wide.cost, best));
    o.require(wide.values[ar] == ac && oracle::path_continuous(wide.values, 8), fmt("map %d: invalid path", m));
    o.require(narrow.cost >= best, fmt("map %d: n=4 beats the optimum", m));
    o.require(oracle::path_continuous(narrow.values, 8), fmt("map %d: invalid n=4 path", m));
    matched += narrow.cost == best;
  }
  o.require(matched >= 30, fmt("n=4 optimal on %d/50 maps", matched));
  o.require(secs < 1.0, fmt("beam search took %.2f s", secs));
  if (o.pass) o.detail = fmt("n=4 optimal on %d/50 maps, beam %.2f s, oracle %.2f s", matched, secs, oracle_secs);
  return o;
}

// 2 and 3 share the runs.
struct BoxRuns {
  Outcome closure;
  Outcome seams;
};

BoxRuns criteria2and3() {
  BoxRuns out;
  std::mt19937_64 rng(2002);
  AugmentConfig config;
  config.s_max = 0.25;
  std::size_t steps = 0;
  const auto t0 = Clock::now();
  for (int run = 0; run < 200; ++run) {
    Dims d;
    std::array<int, 3> lo, ext;
    for (int a = 0; a < 3; ++a) {
      d[a] = 8 + int(rng() % 41);
      // thick enough that the box survives the largest removal
      const int min_ext = d[a] / 4 + 2;
      ext[a] = min_ext + int(rng() % (d[a] - min_ext + 1));
      lo[a] = int(rng() % (d[a] - ext[a] + 1));
    }
    Grid3<float> v(d);
    for (int i = lo[0]; i < lo[0] + ext[0]; ++i)
      for (int j = lo[1]; j < lo[1] + ext[1]; ++j)
        for (int k = lo[2]; k < lo[2] + ext[2]; ++k) v(i, j, k) = 1.0f;
    const VoxelGrid input(GridKind::Occupancy, v);
    const std::uint64_t seed = rng();
    const AugmentResult r = augment(input, config, seed);
    const std::string tag = fmt("run %d", run);
    out.closure.require(oracle::is_solid_box(r.grid), tag + ": output is not a solid box");
    for (int a = 0; a < 3; ++a) {
      const int n = d[a], got = r.grid.dims()[a];
      const int min = int(std::ceil(n * 0.75)), max = int(std::floor(n * 1.25));
      out.closure.require(got >= min && got <= max, tag + fmt(": axis %d has %d cells, N = %d", a, got, n));
    }
    if (out.seams.pass) {
      const VoxelGrid rebuilt = replay(input, r, out.seams, tag);
      out.seams.require(rebuilt == r.grid, tag + ": replayed seams do not reproduce the output");
    }
    steps += r.steps.size();
  }
  const double secs = seconds_since(t0);
  out.closure.require(secs < 120.0, fmt("took %.1f s", secs));
  if (out.closure.pass) out.closure.detail = fmt("200 runs, %.1f s", secs);
  if (out.seams.pass) out.seams.detail = fmt("%zu steps replayed", steps);
  return out;
}

// 4. symmetry detection and mirror variants
Outcome criterion4() {
  Outcome o;
  struct Fixture {
    ShapeSpec spec;
    std::vector<Axis> symmetric;
  };
  std::vector<Fixture> fixtures;
  {
    ShapeSpec b;
    b.side = 20;
    b.extents = {8, 12, 6};
    fixtures.push_back({b, {Axis::X, Axis::Y, Axis::Z}});
    ShapeSpec c = b;
    c.shape = ShapeKind::Cylinder;
    c.radius = 6;
    c.height = 14;
    fixtures.push_back({c, {Axis::X, Axis::Y, Axis::Z}});
    ShapeSpec s = b;
    s.shape = ShapeKind::Sphere;
    s.side = 21;
    s.radius = 7;
    fixtures.push_back({s, {Axis::X, Axis::Y, Axis::Z}});
    ShapeSpec cup = c;
    cup.shape = ShapeKind::Cup;
    cup.thickness = 2;
    fixtures.push_back({cup, {Axis::X, Axis::Z}});
  }
  for (const Fixture& f : fixtures) {
    const VoxelGrid g = make_shape(f.spec);
    for (Axis a : f.symmetric)
      o.require(mismatch_rate(g, a) == 0.0,
                std::string(shape_name(f.spec.shape)) + " not symmetric on " + std::string(axis_name(a)));
  }

  Grid3<float> two({2, 1, 1});
  two(0, 0, 0) = 1.0f;
  o.require(mismatch_rate(VoxelGrid(GridKind::Occupancy, two), Axis::X) == 1.0, "[1,0] fixture rate is not 1");

  std::mt19937_64 rng(4004);
  for (int t = 0; t < 100; ++t) {
    const Dims d{1 + int(rng() % 9), 1 + int(rng() % 9), 1 + int(rng() % 9)};
    const VoxelGrid g = oracle::random_occupancy(d, rng, 0.2 + 0.6 * double(t % 5) / 4.0);
    for (Axis a : kAxes) {
      const double r = mismatch_rate(g, a);
      o.require(r == mismatch_rate(oracle::mirrored(g, a), a), fmt("grid %d: rate changes under mirroring", t));
      o.require(std::abs(r - oracle::mismatch_rate(g, axis_index(a))) <= 1e-12, fmt("grid %d: rate differs", t));
    }
  }

  for (int t = 0; t < 200; ++t) {
    const Dims d{2 + int(rng() % 6), 2 + int(rng() % 6), 2 + int(rng() % 6)};
    const EnergyField f = oracle::random_field(d, rng, t % 2 == 0);
    const Seam s = oracle::random_seam(d[0], d[1], d[2], rng);
    std::vector<Axis> axes;
    for (Axis a : kAxes)
      if (rng() % 2) axes.push_back(a);
    const Seam b = best_mirror_variant(s, f, axes);
    o.require(oracle::naive_seam_sum(f, b.z) <= oracle::naive_seam_sum(f, s.z), fmt("seam %d: mirror is costlier", t));
    o.require(oracle::seam_continuous(b.z, d[2]), fmt("seam %d: mirror broke continuity", t));
  }
  return o;
}

// 5. seam filter constants
Outcome criterion5() {
  Outcome o;
  o.require(seam_filter_threshold(0.0) == 1e-4, "T_c(0)");
  o.require(seam_filter_threshold(4e-4) == 1e-4, "T_c(4e-4)");
  o.require(seam_filter_threshold(2e-4) == 1e-4, "T_c(2e-4)");
  const double above = std::nextafter(4e-4, 1.0);
  o.require(seam_filter_threshold(above) == 0.25 * above, "T_c just above 4e-4");
  for (double e : {5e-4, 1e-3, 0.0123, 0.5, 3.0}) o.require(seam_filter_threshold(e) == 0.25 * e, fmt("T_c(%g)", e));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 6. byte-identical outputs through the command line
Outcome criterion6() {
  Outcome o;
  const fs::path root = fs::path(CARVE3D_BINARY_DIR) / "acceptance_scratch" / "determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  ShapeSpec cup;
  cup.shape = ShapeKind::Cup;
  cup.side = 32;
  cup.radius = 10;
  cup.height = 20;
  cup.thickness = 2;
  write_grid(make_shape(cup), root / "cup.vgrid");
  auto run = [&](const std::string& dir, const std::string& jobs) {
    std::ostringstream out, err;
    return cli::run({"carve3d", "augment", "--input", (root / "cup.vgrid").string(), "--out", (root / dir).string(),
                     "--count", "8", "--seed", "77", "--jobs", jobs},
                    out, err);
  };
  o.require(run("a", "1") == cli::kOk, "first run failed");
  o.require(run("b", "1") == cli::kOk, "second run failed");
  o.require(run("c", "8") == cli::kOk, "--jobs 8 run failed");
  if (!o.pass) return o;
  for (int k = 0; k < 8; ++k) {
    const std::string name = "cup_aug" + std::to_string(k) + ".vgrid";
    const std::string a = slurp(root / "a" / name);
    o.require(!a.empty(), name + " missing");
    o.require(a == slurp(root / "b" / name), name + " differs between runs");
    o.require(a == slurp(root / "c" / name), name + " differs between --jobs 1 and 8");
  }
  return o;
}

// 7. distinct augmentations of the 64^3 cylinder
Outcome criterion7() {
  Outcome o;
  const VoxelGrid g = cylinder(64, kCylinder64Radius, kCylinder64Height);
  const AugmentConfig config;
  const int jobs = int(std::max(1u, std::thread::hardware_concurrency()));
  const auto runs = augment_batch(g, config, 8, kDiversitySeeds[0], jobs);
  std::vector<std::vector<unsigned char>> bytes;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    o.require(runs[r].grid == augment(g, config, kDiversitySeeds[r]).grid, fmt("seed %zu not pinned", r));
    bytes.push_back(encode_vgrid(runs[r].grid));
  }
  int equal_pairs = 0;
  for (std::size_t a = 0; a < bytes.size(); ++a)
    for (std::size_t b = a + 1; b < bytes.size(); ++b) equal_pairs += bytes[a] == bytes[b];
  o.require(equal_pairs == 0, fmt("%d identical pairs", equal_pairs));
  return o;
}

// 8. 128^3 runtime
Outcome criterion8() {
  Outcome o;
  const VoxelGrid g = cylinder(128, kCylinder128Radius, kCylinder128Height);
  const auto t0 = Clock::now();
  const AugmentResult r = augment(g, AugmentConfig{}, 0);
  const double secs = seconds_since(t0);
  o.require(secs <= 30.0, fmt("took %.1f s", secs));
  o.detail = fmt("%zu steps, %.1f s", r.steps.size(), secs);
  return o;
}

// 9. TSDF range and connectivity
Outcome criterion9() {
  Outcome o;
  ShapeSpec s;
  s.side = 24;
  s.extents = {12, 10, 8};
  const VoxelGrid sdf = tsdf_from_occupancy(make_shape(s), 3.0f);
  const AugmentConfig config;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const VoxelGrid out = augment(sdf, config, seed).grid;
    const auto& v = out.values().data();
    o.require((v >= -3.0f).all() && (v <= 3.0f).all(), fmt("seed %llu: value outside [-3, 3]", (unsigned long long)seed));
    const int parts = oracle::component_count(out.dims(), [&](int i, int j, int k) { return out(i, j, k) <= 0.0f; });
    o.require(parts == 1, fmt("seed %llu: %d components", (unsigned long long)seed, parts));
  }
  return o;
}

// 10. baseline sampling constants
Outcome criterion10() {
  Outcome o;
  std::vector<double> logs;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng(seed);
    for (double f : sample_scale_factors(rng))
      o.require(f >= 0.75 && f <= 1.25, fmt("seed %llu: scale factor %g", (unsigned long long)seed, f));
    const WarpSpec w = sample_warp(rng, 0.25);
    for (const AxisWarp& a : w.axes) {
      // mirrored axes repeat each factor once
      const std::size_t distinct = a.mirrored ? a.factors.size() / 2 : a.factors.size();
      for (std::size_t i = 0; i < distinct; ++i) logs.push_back(std::log(a.factors[i]));
    }
  }
  double mean = 0.0;
  for (double l : logs) mean += l;
  mean /= double(logs.size());
  double var = 0.0;
  for (double l : logs) var += (l - mean) * (l - mean);
  const double sd = std::sqrt(var / double(logs.size() - 1));
  o.require(std::abs(sd - 0.25) <= 0.02, fmt("log-factor sd %.4f", sd));
  if (o.pass) o.detail = fmt("log-factor sd %.4f", sd);
  return o;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  const char* names[10] = {"beam search matches exhaustive search",
                           "box closure",
                           "seam validity",
                           "symmetry suite",
                           "seam filter constants",
                           "determinism",
                           "diversity",
                           "128^3 runtime",
                           "TSDF safety",
                           "baseline constants"};
  Outcome results[10];
  results[0] = guarded(criterion1);
  BoxRuns box;
  try {
    box = criteria2and3();
  } catch (const std::exception& e) {
    box.closure = box.seams = {false, std::string("exception: ") + e.what()};
  }
  results[1] = box.closure;
  results[2] = box.seams;
  results[3] = guarded(criterion4);
  results[4] = guarded(criterion5);
  results[5] = guarded(criterion6);
  results[6] = guarded(criterion7);
  results[7] = guarded(criterion8);
  results[8] = guarded(criterion9);
  results[9] = guarded(criterion10);

  int failed = 0;
  for (int c = 0; c < 10; ++c) {
    const Outcome& r = results[c];
    std::printf("%s criterion %d: %s%s%s\n", r.pass ? "PASS" : "FAIL", c + 1, names[c], r.detail.empty() ? "" : " -- ",
                r.detail.c_str());
    failed += !r.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
