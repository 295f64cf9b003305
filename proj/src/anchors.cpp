#include "carve3d/anchors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace carve3d {

void AnchorParams::validate() const {
  if (!(epsilon >= 0.0)) throw PreconditionError("anchor epsilon must be non-negative");
  if (k < 3) throw PreconditionError("anchor cluster count k must be at least 3");
  if (batch < 1 || iters < 1 || simulations < 1 || clusters_per_run < 1)
    throw PreconditionError("anchor batch, iters, simulations and m must be at least 1");
  if (clusters_per_run > retained_count()) throw PreconditionError("m must not exceed ceil(k / 3)");
}

std::vector<Cell> candidate_cells(const VoxelGrid& occupancy, const EnergyField& axial_energy, double epsilon) {
  if (!occupancy.is_occupancy()) throw PreconditionError("candidate_cells expects an occupancy grid");
  if (occupancy.dims() != axial_energy.dims()) throw PreconditionError("grid and energy dims differ");
  std::vector<Cell> out;
  const auto& o = occupancy.values();
  for (int i = 0; i < o.ni(); ++i)
    for (int j = 0; j < o.nj(); ++j)
      for (int k = 0; k < o.nk(); ++k)
        if (o(i, j, k) != 0.0f && axial_energy(i, j, k) < epsilon) out.push_back({i, j, k});
  return out;
}

namespace {

Eigen::Vector3d position(const Cell& c) { return Eigen::Vector3d(c[0], c[1], c[2]); }

int nearest(const Eigen::Vector3d& p, std::span<const Eigen::Vector3d> centroids, double* dist_sq = nullptr) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = (centroids[c] - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (dist_sq) *dist_sq = best_d;
  return best;
}

}  // namespace

std::vector<Eigen::Vector3d> seed_centroids(std::span<const Cell> cells, int k, Rng& rng) {
  if (cells.empty() || k < 1) throw PreconditionError("seed_centroids needs cells and k >= 1");
  std::vector<Eigen::Vector3d> centroids;
  centroids.push_back(position(cells[uniform_index(rng, static_cast<int>(cells.size()))]));
  std::vector<double> d2(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) d2[c] = (position(cells[c]) - centroids[0]).squaredNorm();
  while (static_cast<int>(centroids.size()) < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    if (!(total > 0.0)) break;
    const double r = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    std::size_t pick = cells.size() - 1;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      acc += d2[c];
      if (r < acc && d2[c] > 0.0) {
        pick = c;
        break;
      }
    }
    centroids.push_back(position(cells[pick]));
    for (std::size_t c = 0; c < cells.size(); ++c)
      d2[c] = std::min(d2[c], (position(cells[c]) - centroids.back()).squaredNorm());
  }
  return centroids;
}

double clustering_objective(std::span<const Cell> cells, std::span<const Eigen::Vector3d> centroids) {
  double total = 0.0;
  for (const Cell& c : cells) {
    double d = 0.0;
    nearest(position(c), centroids, &d);
    total += d;
  }
  return total;
}

AnchorModel cluster_candidates(std::span<const Cell> cells, const AnchorParams& params, Rng& rng) {
  // k >= 3 is a pipeline setting; the clustering itself only needs k >= 1.
  if (params.k < 1 || params.batch < 1 || params.iters < 1)
    throw PreconditionError("cluster_candidates needs k, batch and iters >= 1");
  if (cells.empty()) throw PreconditionError("cluster_candidates needs at least one cell");
  const int n = static_cast<int>(cells.size());

  const std::vector<Eigen::Vector3d> seeds = seed_centroids(cells, params.k, rng);
  std::vector<Eigen::Vector3d> centroids = seeds;
  std::vector<long long> counts(centroids.size(), 0);
  std::vector<int> batch(params.batch);
  std::vector<int> assigned(params.batch);
  for (int it = 0; it < params.iters; ++it) {
    for (int b = 0; b < params.batch; ++b) {
      batch[b] = uniform_index(rng, n);
      assigned[b] = nearest(position(cells[batch[b]]), centroids);
    }
    for (int b = 0; b < params.batch; ++b) {
      const int c = assigned[b];
      const double eta = 1.0 / double(++counts[c]);
      centroids[c] = (1.0 - eta) * centroids[c] + eta * position(cells[batch[b]]);
    }
  }
  if (clustering_objective(cells, centroids) > clustering_objective(cells, seeds)) centroids = seeds;

  AnchorModel model;
  model.clusters.resize(centroids.size());
  for (std::size_t c = 0; c < centroids.size(); ++c) model.clusters[c].centroid = centroids[c];
  reassign_candidates(model, cells);
  std::erase_if(model.clusters, [](const Cluster& c) { return c.members.empty(); });
  model.candidate_count = cells.size();
  model.scores.assign(model.clusters.size(), 0.0);
  model.retained.resize(std::min<std::size_t>(params.retained_count(), model.clusters.size()));
  std::iota(model.retained.begin(), model.retained.end(), 0);
  return model;
}

void reassign_candidates(AnchorModel& model, std::span<const Cell> cells) {
  std::vector<Eigen::Vector3d> centroids;
  centroids.reserve(model.clusters.size());
  for (auto& cluster : model.clusters) {
    centroids.push_back(cluster.centroid);
    cluster.members.clear();
  }
  if (centroids.empty()) return;
  for (const Cell& c : cells) model.clusters[nearest(position(c), centroids)].members.push_back(c);
}

void score_clusters(AnchorModel& model, const EnergyMap2D& reduced_x, const EnergyMap2D& reduced_y,
                    const AnchorParams& params, const BeamParams& beam, Rng& rng) {
  if (model.clusters.empty()) throw PreconditionError("score_clusters needs at least one cluster");
  model.scores.assign(model.clusters.size(), 0.0);
  for (std::size_t c = 0; c < model.clusters.size(); ++c) {
    const auto& members = model.clusters[c].members;
    if (members.empty()) {
      model.scores[c] = std::numeric_limits<double>::infinity();
      continue;
    }
    double sum = 0.0;
    for (int s = 0; s < params.simulations; ++s) {
      const Cell& cell = members[uniform_index(rng, static_cast<int>(members.size()))];
      const double cx = beam_search_2d(reduced_x, cell[1], cell[2], beam).cost;
      const double cy = beam_search_2d(reduced_y, cell[0], cell[2], beam).cost;
      sum += std::min(cx, cy);
    }
    model.scores[c] = sum / params.simulations;
  }
  std::vector<int> order(model.clusters.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return model.scores[a] < model.scores[b]; });
  order.resize(std::min<std::size_t>(params.retained_count(), order.size()));
  model.retained = std::move(order);
}

std::vector<int> select_run_clusters(const AnchorModel& model, int m, Rng& rng) {
  std::vector<int> pool = model.retained;
  const int take = std::min<int>(m, static_cast<int>(pool.size()));
  for (int t = 0; t < take; ++t) {
    const int pick = t + uniform_index(rng, static_cast<int>(pool.size()) - t);
    std::swap(pool[t], pool[pick]);
  }
  pool.resize(take);
  return pool;
}

AnchorDraw sample_anchor(const AnchorModel& model, std::span<const int> selected, Rng& rng,
                         const VoxelGrid& occupancy, const EnergyField& energy) {
  std::vector<int> usable;
  for (int c : selected)
    if (c >= 0 && c < static_cast<int>(model.clusters.size()) && !model.clusters[c].members.empty()) usable.push_back(c);
  if (!usable.empty()) {
    const auto& members = model.clusters[usable[uniform_index(rng, static_cast<int>(usable.size()))]].members;
    return {members[uniform_index(rng, static_cast<int>(members.size()))], false};
  }

  const VoxelGrid occ = as_occupancy(occupancy);
  if (occ.dims() != energy.dims()) throw PreconditionError("grid and energy dims differ");
  const auto& o = occ.values();
  AnchorDraw best{{0, 0, 0}, true};
  double best_e = std::numeric_limits<double>::infinity();
  for (int i = 0; i < o.ni(); ++i)
    for (int j = 0; j < o.nj(); ++j)
      for (int k = 0; k < o.nk(); ++k)
        if (o(i, j, k) != 0.0f && energy(i, j, k) < best_e) {
          best_e = energy(i, j, k);
          best.cell = {i, j, k};
        }
  if (best_e == std::numeric_limits<double>::infinity()) throw NoAnchorError("grid has no occupied cells");
  return best;
}

}  // namespace carve3d
