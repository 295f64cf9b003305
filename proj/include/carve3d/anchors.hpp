#pragma once

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

#include "carve3d/beam_search.hpp"
#include "carve3d/energy.hpp"
#include "carve3d/grid.hpp"
#include "carve3d/rng.hpp"

namespace carve3d {

using Cell = std::array<int, 3>;

struct AnchorParams {
  double epsilon = 1e-3;
  int k = 12;
  int batch = 256;
  int iters = 30;
  int simulations = 3;
  int clusters_per_run = 2;

  void validate() const;
  int retained_count() const { return (k + 2) / 3; }
};

struct Cluster {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  std::vector<Cell> members;
};

struct AnchorModel {
  std::vector<Cluster> clusters;
  std::vector<double> scores;
  // Indices into `clusters`, cheapest score first.
  std::vector<int> retained;
  std::size_t candidate_count = 0;

  bool empty() const { return clusters.empty(); }
};

// Occupied cells whose axial energy is below epsilon, row-major.
std::vector<Cell> candidate_cells(const VoxelGrid& occupancy, const EnergyField& axial_energy, double epsilon);

// Mini-batch k-means: k-means++ seeding, `iters` rounds of per-centroid
// 1/count updates on `batch` samples, then a full nearest-centroid
// assignment. Empty clusters are dropped. If refinement ends with a higher
// within-cluster sum of squares than the seeding, the seeds are kept.
AnchorModel cluster_candidates(std::span<const Cell> cells, const AnchorParams& params, Rng& rng);

// k-means++ seeding: up to k distinct cell positions (fewer when the cells
// have fewer distinct positions).
std::vector<Eigen::Vector3d> seed_centroids(std::span<const Cell> cells, int k, Rng& rng);

double clustering_objective(std::span<const Cell> cells, std::span<const Eigen::Vector3d> centroids);

// Mean over `simulations` draws of the cheaper beam-search cost when a random
// member is projected onto both reduced maps; retains the ceil(k/3) cheapest.
void score_clusters(AnchorModel& model, const EnergyMap2D& reduced_x, const EnergyMap2D& reduced_y,
                    const AnchorParams& params, const BeamParams& beam, Rng& rng);

// Redistributes fresh candidates over the existing centroids.
void reassign_candidates(AnchorModel& model, std::span<const Cell> cells);

// Draws min(m, retained) distinct retained clusters for one augmentation.
std::vector<int> select_run_clusters(const AnchorModel& model, int m, Rng& rng);

struct AnchorDraw {
  Cell cell{};
  bool fallback = false;
};

// Uniform cluster among the non-empty selected ones, then a uniform member.
// Without any usable member, falls back to the occupied cell of minimal
// energy (first in row-major order); throws NoAnchorError when nothing is
// occupied.
AnchorDraw sample_anchor(const AnchorModel& model, std::span<const int> selected, Rng& rng,
                         const VoxelGrid& occupancy, const EnergyField& energy);

}  // namespace carve3d
