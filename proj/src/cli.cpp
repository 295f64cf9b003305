#include "carve3d/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "carve3d/baselines.hpp"
#include "carve3d/carve.hpp"
#include "carve3d/config_json.hpp"
#include "carve3d/energy.hpp"
#include "carve3d/grid_io.hpp"
#include "carve3d/shapes.hpp"
#include "carve3d/symmetry.hpp"

#ifndef CARVE3D_VERSION
#define CARVE3D_VERSION "0.0.0"
#endif

namespace carve3d::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised for argument combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto logger = std::make_shared<spdlog::logger>("carve3d", std::make_shared<spdlog::sinks::ostream_sink_mt>(err));
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* level = std::getenv("CARVE3D_LOG")) {
    const std::string name(level);
    if (name == "error") logger->set_level(spdlog::level::err);
    if (name == "info") logger->set_level(spdlog::level::info);
    if (name == "debug") logger->set_level(spdlog::level::debug);
  }
  return logger;
}

void write_json_file(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json grid_summary(const VoxelGrid& grid) {
  return {{"dims", grid.dims()}, {"kind", grid.is_occupancy() ? "occ" : "sdf"}};
}

struct AugmentArgs {
  std::string input;
  std::string out;
  std::string from_manifest;
  int count = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool steps_log = false;
  AugmentConfig config;
  double tie_tol = -1.0;
  std::string energy = "axial";
  std::string insertion;
};

void add_augment_options(CLI::App& cmd, AugmentArgs& a) {
  cmd.add_option("--input", a.input, "Input grid (.vgrid or .txt)");
  cmd.add_option("--out", a.out, "Output directory")->required();
  cmd.add_option("--from-manifest", a.from_manifest, "Replay input, count, seed and config from a manifest");
  cmd.add_option("--count", a.count, "Number of augmented samples")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", a.seed, "Seed of the first sample; sample k uses seed + k");
  cmd.add_option("--jobs", a.jobs, "Samples processed concurrently")->check(CLI::PositiveNumber);
  cmd.add_flag("--steps-log", a.steps_log, "Also write steps.jsonl");
  auto& c = a.config;
  cmd.add_option("--smax", c.s_max, "Maximum per-axis scaling factor");
  cmd.add_option("--beam", c.beam_width, "Beam width");
  cmd.add_option("--tie-tol", a.tie_tol, "Equal-cost tolerance (default by grid kind)");
  cmd.add_option("--ts", c.symmetry_threshold, "Symmetry threshold on the mismatch rate");
  cmd.add_option("--energy", a.energy, "Energy function")->check(CLI::IsMember({"axial", "full"}));
  cmd.add_option("--retries", c.retries, "Anchors tried per step before giving up");
  cmd.add_option("--insertion", a.insertion, "Inserted value policy")->check(CLI::IsMember({"replicate", "average"}));
  cmd.add_option("--epsilon", c.anchors.epsilon, "Anchor energy threshold");
  cmd.add_option("--k", c.anchors.k, "Anchor clusters");
  cmd.add_option("--batch", c.anchors.batch, "Mini-batch size");
  cmd.add_option("--iters", c.anchors.iters, "Mini-batch k-means iterations");
  cmd.add_option("--sims", c.anchors.simulations, "Beam-search simulations per cluster");
  cmd.add_option("--m", c.anchors.clusters_per_run, "Clusters drawn per augmentation");
}

json step_summary(const AugmentResult& r) {
  int accepted = 0;
  for (const auto& s : r.steps) accepted += s.accepted;
  return {{"dims", r.grid.dims()},
          {"steps", r.steps.size()},
          {"accepted", accepted},
          {"rejected", static_cast<int>(r.steps.size()) - accepted}};
}

int cmd_augment(AugmentArgs a, std::ostream& out, spdlog::logger& log) {
  if (!a.from_manifest.empty()) {
    std::ifstream in(a.from_manifest);
    if (!in) throw IoError("cannot open " + a.from_manifest);
    const json m = json::parse(in);
    a.input = m.at("input").get<std::string>();
    a.count = m.at("count").get<int>();
    a.seed = m.at("seed").get<std::uint64_t>();
    a.steps_log = m.value("steps_log", false);
    a.config = augment_config_from_json(m.at("config"));
  } else {
    if (a.input.empty()) throw UsageError("--input is required");
    a.config.energy_kind = a.energy == "full" ? EnergyKind::Full : EnergyKind::Axial;
    if (a.tie_tol >= 0.0) a.config.tie_tol = a.tie_tol;
    if (a.insertion == "replicate") a.config.insertion_policy = InsertionPolicy::Replicate;
    if (a.insertion == "average") a.config.insertion_policy = InsertionPolicy::Average;
  }
  try {
    a.config.validate();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }

  const VoxelGrid grid = load_grid_any(a.input);
  fs::create_directories(a.out);
  log.info("augmenting {} x{} (seed {}, jobs {})", a.input, a.count, a.seed, a.jobs);
  const auto results = augment_batch(grid, a.config, a.count, a.seed, a.jobs);

  const std::string stem = fs::path(a.input).stem().string();
  json outputs = json::array();
  std::ofstream steps;
  if (a.steps_log) {
    steps.open(fs::path(a.out) / "steps.jsonl", std::ios::trunc);
    if (!steps) throw IoError("cannot write steps.jsonl");
  }
  for (int k = 0; k < a.count; ++k) {
    const std::string name = stem + "_aug" + std::to_string(k) + ".vgrid";
    write_grid(results[k].grid, fs::path(a.out) / name);
    json entry = step_summary(results[k]);
    entry["file"] = name;
    entry["seed"] = a.seed + std::uint64_t(k);
    outputs.push_back(entry);
    if (a.steps_log) {
      for (const auto& s : results[k].steps) {
        json line = to_json(s);
        line["output"] = k;
        steps << line.dump() << '\n';
      }
    }
    log.debug("{}: {} steps", name, results[k].steps.size());
  }
  const json manifest{{"tool", "carve3d"},
                      {"version", CARVE3D_VERSION},
                      {"command", "augment"},
                      {"input", a.input},
                      {"output_dir", a.out},
                      {"count", a.count},
                      {"seed", a.seed},
                      {"steps_log", a.steps_log},
                      {"input_grid", grid_summary(grid)},
                      {"config", to_json(a.config)},
                      {"outputs", outputs}};
  write_json_file(manifest, fs::path(a.out) / "manifest.json");
  out << manifest.dump() << '\n';
  return kOk;
}

struct BaselineArgs {
  std::string method;
  std::string input;
  std::string out;
  int count = 1;
  std::uint64_t seed = 0;
  double sigma = 0.25;
  int intervals = 6;
};

int cmd_baseline(const BaselineArgs& a, std::ostream& out, spdlog::logger& log) {
  if (a.method != "scale" && a.method != "warp") throw UsageError("unknown method '" + a.method + "'");
  if (!(a.sigma > 0.0)) throw UsageError("--sigma must be positive");
  const VoxelGrid grid = load_grid_any(a.input);
  fs::create_directories(a.out);
  const std::string stem = fs::path(a.input).stem().string();
  json outputs = json::array();
  for (int k = 0; k < a.count; ++k) {
    Rng rng(a.seed + std::uint64_t(k));
    json entry;
    VoxelGrid result;
    if (a.method == "scale") {
      const ScaleFactors f = sample_scale_factors(rng);
      result = axis_scale(grid, f);
      entry["factors"] = f;
    } else {
      const WarpSpec spec = sample_warp(rng, a.sigma, a.intervals);
      result = piecewise_warp(grid, spec);
      entry["warp"] = to_json(spec);
    }
    const std::string name = stem + "_" + a.method + std::to_string(k) + ".vgrid";
    write_grid(result, fs::path(a.out) / name);
    entry["file"] = name;
    entry["seed"] = a.seed + std::uint64_t(k);
    entry["dims"] = result.dims();
    outputs.push_back(entry);
  }
  log.info("{} baseline: wrote {} grids", a.method, a.count);
  json manifest{{"tool", "carve3d"},
                {"version", CARVE3D_VERSION},
                {"command", "baseline"},
                {"method", a.method},
                {"input", a.input},
                {"output_dir", a.out},
                {"count", a.count},
                {"seed", a.seed},
                {"input_grid", grid_summary(grid)},
                {"outputs", outputs}};
  if (a.method == "warp") {
    manifest["sigma"] = a.sigma;
    manifest["intervals"] = a.intervals;
  }
  write_json_file(manifest, fs::path(a.out) / "manifest.json");
  out << manifest.dump() << '\n';
  return kOk;
}

int cmd_info(const std::string& path, double threshold, std::ostream& out) {
  const VoxelGrid grid = load_grid_any(path);
  const SymmetryReport sym = detect_symmetry(grid, threshold);
  json e_avg = json::object(), rates = json::object();
  for (Axis a : kAxes) {
    e_avg[std::string(axis_name(a))] = mean_energy(compute_energy(permute_for_axis(grid, a)));
    rates[std::string(axis_name(a))] = sym.rate(a);
  }
  json symmetric = json::array();
  for (Axis a : sym.symmetric_axes) symmetric.push_back(axis_name(a));
  json info{{"path", path},
            {"dims", grid.dims()},
            {"kind", grid.is_occupancy() ? "occ" : "sdf"},
            {"trunc", grid.trunc() ? json(*grid.trunc()) : json(nullptr)},
            {"occupied", occupied_count(grid)},
            {"e_avg", e_avg},
            {"symmetry_rates", rates},
            {"symmetric_axes", symmetric},
            {"symmetry_threshold", threshold}};
  out << info.dump(2) << '\n';
  return kOk;
}

struct GenArgs {
  std::string shape = "box";
  std::string out;
  int side = 32;
  std::vector<int> extents;
  std::vector<int> origin;
  int radius = 8;
  int height = 16;
  int thickness = 2;
  float tsdf = 0.0f;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const auto kind = parse_shape(a.shape);
  if (!kind) throw UsageError("unknown shape '" + a.shape + "'");
  ShapeSpec spec;
  spec.shape = *kind;
  spec.side = a.side;
  spec.radius = a.radius;
  spec.height = a.height;
  spec.thickness = a.thickness;
  if (!a.extents.empty()) {
    if (a.extents.size() != 3) throw UsageError("--extents takes three values");
    spec.extents = {a.extents[0], a.extents[1], a.extents[2]};
  } else {
    spec.extents = {a.side / 2, a.side / 2, a.side / 2};
  }
  if (!a.origin.empty()) {
    if (a.origin.size() != 3) throw UsageError("--origin takes three values");
    spec.origin = std::array<int, 3>{a.origin[0], a.origin[1], a.origin[2]};
  }
  VoxelGrid grid = make_shape(spec);
  if (a.tsdf > 0.0f) grid = tsdf_from_occupancy(grid, a.tsdf);
  save_grid_any(grid, a.out);
  out << json{{"output", a.out}, {"dims", grid.dims()}, {"occupied", occupied_count(grid)}}.dump() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto logger = make_logger(err);
  CLI::App app{"carve3d: content-aware seam carving for voxel shapes"};
  app.set_version_flag("--version", CARVE3D_VERSION);
  app.require_subcommand(1);

  AugmentArgs augment_args;
  auto* augment_cmd = app.add_subcommand("augment", "Seam-carving augmentation");
  add_augment_options(*augment_cmd, augment_args);

  BaselineArgs baseline_args;
  auto* baseline_cmd = app.add_subcommand("baseline", "Axis scaling or piecewise warping baselines");
  baseline_cmd->add_option("--method", baseline_args.method, "scale or warp")->required();
  baseline_cmd->add_option("--input", baseline_args.input, "Input grid")->required();
  baseline_cmd->add_option("--out", baseline_args.out, "Output directory")->required();
  baseline_cmd->add_option("--count", baseline_args.count, "Number of samples")->check(CLI::PositiveNumber);
  baseline_cmd->add_option("--seed", baseline_args.seed, "Seed of the first sample; sample k uses seed + k");
  baseline_cmd->add_option("--sigma", baseline_args.sigma, "Log-normal std of warp factors");
  baseline_cmd->add_option("--intervals", baseline_args.intervals, "Warp sub-intervals")->check(CLI::PositiveNumber);

  std::string info_path;
  double info_threshold = 0.05;
  auto* info_cmd = app.add_subcommand("info", "Print grid statistics as JSON");
  info_cmd->add_option("path", info_path)->required();
  info_cmd->add_option("--ts", info_threshold, "Symmetry threshold");

  std::string convert_in, convert_out;
  auto* convert_cmd = app.add_subcommand("convert", "Convert between .vgrid and .txt");
  convert_cmd->add_option("input", convert_in)->required();
  convert_cmd->add_option("output", convert_out)->required();

  std::string obj_in, obj_out;
  auto* obj_cmd = app.add_subcommand("export-obj", "Write a voxel OBJ mesh");
  obj_cmd->add_option("input", obj_in)->required();
  obj_cmd->add_option("output", obj_out)->required();

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic fixture");
  gen_cmd->add_option("--shape", gen_args.shape, "box, cylinder, sphere, lbracket or cup");
  gen_cmd->add_option("--side", gen_args.side, "Grid side")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--extents", gen_args.extents, "Box / bracket extents")->expected(3);
  gen_cmd->add_option("--origin", gen_args.origin, "Box origin")->expected(3);
  gen_cmd->add_option("--radius", gen_args.radius);
  gen_cmd->add_option("--height", gen_args.height);
  gen_cmd->add_option("--thickness", gen_args.thickness);
  gen_cmd->add_option("--tsdf", gen_args.tsdf, "Write a TSDF with this truncation instead of occupancy");
  gen_cmd->add_option("output", gen_args.out)->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  try {
    if (*augment_cmd) return cmd_augment(augment_args, out, *logger);
    if (*baseline_cmd) return cmd_baseline(baseline_args, out, *logger);
    if (*info_cmd) return cmd_info(info_path, info_threshold, out);
    if (*convert_cmd) {
      save_grid_any(load_grid_any(convert_in), convert_out);
      return kOk;
    }
    if (*obj_cmd) {
      const auto stats = export_obj(load_grid_any(obj_in), obj_out);
      out << json{{"output", obj_out}, {"vertices", stats.vertices}, {"faces", stats.faces}}.dump() << '\n';
      return kOk;
    }
    if (*gen_cmd) return cmd_gen(gen_args, out);
  } catch (const UsageError& e) {
    logger->error("{}", e.what());
    return kBadArguments;
  } catch (const SpecError& e) {
    logger->error("{}", e.what());
    return kBadArguments;
  } catch (const FormatError& e) {
    logger->error("{}", e.what());
    return kIoError;
  } catch (const IoError& e) {
    logger->error("{}", e.what());
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    logger->error("{}", e.what());
    return kIoError;
  } catch (const json::exception& e) {
    logger->error("manifest: {}", e.what());
    return kIoError;
  } catch (const std::exception& e) {
    logger->error("{}", e.what());
    return kAugmentError;
  }
  return kBadArguments;
}

}  // namespace carve3d::cli
