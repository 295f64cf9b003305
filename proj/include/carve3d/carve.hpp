#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carve3d/anchors.hpp"
#include "carve3d/beam_search.hpp"
#include "carve3d/energy.hpp"
#include "carve3d/grid.hpp"
#include "carve3d/rng.hpp"
#include "carve3d/symmetry.hpp"

namespace carve3d {

enum class InsertionPolicy { Replicate, Average };
enum class Direction { Insert, Remove };

struct AugmentConfig {
  double s_max = 0.25;
  int beam_width = 4;
  // Unset: default_tie_tol(grid kind).
  std::optional<double> tie_tol;
  AnchorParams anchors;
  double symmetry_threshold = 0.05;
  EnergyKind energy_kind = EnergyKind::Axial;
  int retries = 5;
  // Unset: Replicate for occupancy, Average for scalar grids.
  std::optional<InsertionPolicy> insertion_policy;

  void validate() const;
  BeamParams beam_for(GridKind kind) const;
  InsertionPolicy insertion_for(GridKind kind) const;
};

// One carve step. Coordinates are in the permuted frame of `axis` (cutting
// axis third).
struct StepLog {
  Axis axis = Axis::X;
  Direction direction = Direction::Remove;
  Cell anchor{};
  bool fallback_anchor = false;
  // Reducing axis of the winning candidate (X -> seam^x, Y -> seam^y).
  Axis seam_source = Axis::X;
  std::vector<Axis> mirrors;
  double seam_mean_cost = 0.0;
  double threshold = 0.0;
  bool accepted = false;
  int retries_used = 0;
  // Last evaluated seam (the applied one when accepted).
  Seam seam;
};

// Per-axis-pass state shared by consecutive steps.
struct PassState {
  AnchorModel model;
  std::vector<int> selected;
  bool built = false;
  // Symmetric axes of the permuted grid, detected at pass start.
  std::vector<Axis> symmetric_axes;
};

// Drops cell z(i, j) from every column; N_k shrinks by one.
VoxelGrid remove_seam(const VoxelGrid& grid, const Seam& seam);

// Inserts a cell after z(i, j) in every column; N_k grows by one.
VoxelGrid insert_seam(const VoxelGrid& grid, const Seam& seam, InsertionPolicy policy);

// `grid` must already be permuted so the cutting axis is the third index.
// Rejected steps leave the grid unchanged.
VoxelGrid carve_step(const VoxelGrid& grid, const AugmentConfig& config, Rng& rng, Direction direction,
                     PassState& pass, StepLog& log);

struct AugmentResult {
  VoxelGrid grid;
  std::vector<StepLog> steps;
};

AugmentResult augment(const VoxelGrid& grid, const AugmentConfig& config, std::uint64_t seed);

class BatchError : public std::runtime_error {
 public:
  BatchError(int run, const std::string& what)
      : std::runtime_error("run " + std::to_string(run) + ": " + what), run_(run) {}
  int run() const noexcept { return run_; }

 private:
  int run_;
};

// Runs seeds base_seed .. base_seed + count - 1 on up to `jobs` threads.
// Results are in seed order and independent of `jobs`.
std::vector<AugmentResult> augment_batch(const VoxelGrid& grid, const AugmentConfig& config, int count,
                                         std::uint64_t base_seed, int jobs = 1);

std::string_view direction_name(Direction d);

// One JSON object per line.
void write_step_log_jsonl(const std::vector<StepLog>& steps, std::ostream& out);

}  // namespace carve3d
