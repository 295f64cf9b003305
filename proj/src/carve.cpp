#include "carve3d/carve.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

namespace carve3d {

void AugmentConfig::validate() const {
  if (!(s_max >= 0.0 && s_max < 1.0)) throw PreconditionError("s_max must lie in [0, 1)");
  if (beam_width < 1) throw PreconditionError("beam width must be at least 1");
  if (tie_tol && !(*tie_tol >= 0.0)) throw PreconditionError("tie tolerance must be non-negative");
  if (!(symmetry_threshold > 0.0 && symmetry_threshold < 1.0))
    throw PreconditionError("symmetry threshold must lie in (0, 1)");
  if (retries < 1) throw PreconditionError("retries must be at least 1");
  anchors.validate();
}

BeamParams AugmentConfig::beam_for(GridKind kind) const {
  return BeamParams{beam_width, tie_tol.value_or(default_tie_tol(kind))};
}

InsertionPolicy AugmentConfig::insertion_for(GridKind kind) const {
  if (kind == GridKind::Occupancy) return InsertionPolicy::Replicate;
  return insertion_policy.value_or(InsertionPolicy::Average);
}

std::string_view direction_name(Direction d) { return d == Direction::Insert ? "insert" : "remove"; }

namespace {

void check_seam(const VoxelGrid& grid, const Seam& seam) {
  const Dims& d = grid.dims();
  if (seam.ni() != d[0] || seam.nj() != d[1]) throw PreconditionError("seam dims do not match the grid");
  if (seam.z.size() > 0 && (seam.z.minCoeff() < 0 || seam.z.maxCoeff() >= d[2]))
    throw BoundsError("seam index outside the cutting axis");
}

}  // namespace

VoxelGrid remove_seam(const VoxelGrid& grid, const Seam& seam) {
  const Dims& d = grid.dims();
  if (d[2] < 2) throw PreconditionError("cannot remove a seam from a single-layer grid");
  check_seam(grid, seam);
  Grid3<float> out({d[0], d[1], d[2] - 1});
  for (int i = 0; i < d[0]; ++i) {
    for (int j = 0; j < d[1]; ++j) {
      const int z = seam.z(i, j);
      const auto src = grid.values().column(i, j);
      auto dst = out.column(i, j);
      dst.head(z) = src.head(z);
      dst.tail(d[2] - 1 - z) = src.tail(d[2] - 1 - z);
    }
  }
  return VoxelGrid(grid.kind(), std::move(out), grid.trunc());
}

VoxelGrid insert_seam(const VoxelGrid& grid, const Seam& seam, InsertionPolicy policy) {
  if (policy == InsertionPolicy::Average && grid.is_occupancy())
    throw PreconditionError("average insertion requires a scalar grid");
  check_seam(grid, seam);
  const Dims& d = grid.dims();
  Grid3<float> out({d[0], d[1], d[2] + 1});
  for (int i = 0; i < d[0]; ++i) {
    for (int j = 0; j < d[1]; ++j) {
      const int z = seam.z(i, j);
      const auto src = grid.values().column(i, j);
      auto dst = out.column(i, j);
      dst.head(z + 1) = src.head(z + 1);
      dst.tail(d[2] - 1 - z) = src.tail(d[2] - 1 - z);
      float value = src[z];
      if (policy == InsertionPolicy::Average) {
        value = 0.5f * (src[z] + src[std::min(z + 1, d[2] - 1)]);
        if (grid.trunc()) value = std::clamp(value, -*grid.trunc(), *grid.trunc());
      }
      dst[z + 1] = value;
    }
  }
  return VoxelGrid(grid.kind(), std::move(out), grid.trunc());
}

namespace {

void rebuild_anchor_model(PassState& pass, std::vector<Cell> cells, const EnergyMap2D& reduced_x,
                          const EnergyMap2D& reduced_y, const AugmentConfig& config, const BeamParams& beam,
                          Rng& rng) {
  pass.built = true;
  pass.model = AnchorModel{};
  pass.selected.clear();
  if (cells.empty()) return;
  pass.model = cluster_candidates(cells, config.anchors, rng);
  score_clusters(pass.model, reduced_x, reduced_y, config.anchors, beam, rng);
  pass.selected = select_run_clusters(pass.model, config.anchors.clusters_per_run, rng);
}

// Reuses the pass's clusters for the current candidates; rebuilds when more
// than a quarter of the candidates present at build time have vanished or
// none of the selected clusters has members left.
void refresh_anchor_model(PassState& pass, const VoxelGrid& occupancy, const EnergyField& axial,
                          const EnergyMap2D& reduced_x, const EnergyMap2D& reduced_y, const AugmentConfig& config,
                          const BeamParams& beam, Rng& rng) {
  std::vector<Cell> cells = candidate_cells(occupancy, axial, config.anchors.epsilon);
  const bool stale = !pass.built || (pass.model.empty() && !cells.empty()) ||
                     4 * cells.size() < 3 * pass.model.candidate_count;
  if (!stale) {
    reassign_candidates(pass.model, cells);
    bool usable = false;
    for (int c : pass.selected) usable = usable || !pass.model.clusters[c].members.empty();
    if (usable || cells.empty()) return;
  }
  rebuild_anchor_model(pass, std::move(cells), reduced_x, reduced_y, config, beam, rng);
}

}  // namespace

VoxelGrid carve_step(const VoxelGrid& grid, const AugmentConfig& config, Rng& rng, Direction direction,
                     PassState& pass, StepLog& log) {
  const VoxelGrid occupancy = as_occupancy(grid);
  const EnergyField field = compute_energy(grid, config.energy_kind);
  std::optional<EnergyField> axial_storage;
  if (config.energy_kind != EnergyKind::Axial) axial_storage = compute_energy(grid, EnergyKind::Axial);
  const EnergyField& axial = axial_storage ? *axial_storage : field;

  const EnergyMap2D reduced_x = reduce_over_axis(field, Axis::X);
  const EnergyMap2D reduced_y = reduce_over_axis(field, Axis::Y);
  const double threshold = seam_filter_threshold(mean_energy(field));
  const BeamParams beam = config.beam_for(grid.kind());
  refresh_anchor_model(pass, occupancy, axial, reduced_x, reduced_y, config, beam, rng);

  log.direction = direction;
  log.threshold = threshold;
  log.accepted = false;
  for (int attempt = 1; attempt <= config.retries; ++attempt) {
    const AnchorDraw draw = sample_anchor(pass.model, pass.selected, rng, occupancy, field);
    const auto [i, j, k] = draw.cell;
    const Path2D path_x = beam_search_2d(reduced_x, j, k, beam);
    const Path2D path_y = beam_search_2d(reduced_y, i, k, beam);
    Seam seam_x = lift_to_seam_3d(field, path_x, i, Axis::X, beam);
    Seam seam_y = lift_to_seam_3d(field, path_y, j, Axis::Y, beam);
    const bool use_x = seam_x.cost_mean <= seam_y.cost_mean;

    log.anchor = draw.cell;
    log.fallback_anchor = draw.fallback;
    log.seam_source = use_x ? Axis::X : Axis::Y;
    log.seam = best_mirror_variant(use_x ? seam_x : seam_y, field, pass.symmetric_axes, &log.mirrors);
    log.seam_mean_cost = log.seam.cost_mean;
    log.retries_used = attempt;
    if (log.seam.cost_mean <= threshold) {
      log.accepted = true;
      return direction == Direction::Remove ? remove_seam(grid, log.seam)
                                            : insert_seam(grid, log.seam, config.insertion_for(grid.kind()));
    }
  }
  return grid;
}

AugmentResult augment(const VoxelGrid& grid, const AugmentConfig& config, std::uint64_t seed) {
  config.validate();
  grid.validate();
  Rng rng(seed);
  AugmentResult result{grid, {}};
  for (Axis axis : kAxes) {
    VoxelGrid work = permute_for_axis(result.grid, axis);
    const int bound = static_cast<int>(std::floor(work.dims()[2] * config.s_max));
    const int delta = std::uniform_int_distribution<int>(-bound, bound)(rng);
    if (delta != 0) {
      PassState pass;
      pass.symmetric_axes = detect_symmetry(work, config.symmetry_threshold).symmetric_axes;
      const Direction direction = delta > 0 ? Direction::Insert : Direction::Remove;
      for (int step = 0; step < std::abs(delta); ++step) {
        StepLog log;
        log.axis = axis;
        work = carve_step(work, config, rng, direction, pass, log);
        result.steps.push_back(std::move(log));
      }
    }
    result.grid = permute_for_axis(work, axis);
  }
  return result;
}

std::vector<AugmentResult> augment_batch(const VoxelGrid& grid, const AugmentConfig& config, int count,
                                         std::uint64_t base_seed, int jobs) {
  if (count < 1) throw PreconditionError("batch count must be at least 1");
  config.validate();
  std::vector<std::optional<AugmentResult>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int run = next++; run < count; run = next++) {
      try {
        results[run] = augment(grid, config, base_seed + std::uint64_t(run));
      } catch (...) {
        errors[run] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, count);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<AugmentResult> out;
  out.reserve(count);
  for (int run = 0; run < count; ++run) {
    if (errors[run]) {
      try {
        std::rethrow_exception(errors[run]);
      } catch (const std::exception& e) {
        throw BatchError(run, e.what());
      }
    }
    out.push_back(std::move(*results[run]));
  }
  return out;
}

}  // namespace carve3d
