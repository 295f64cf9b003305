#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "carve3d/energy.hpp"
#include "carve3d/seam.hpp"

namespace carve3d {

struct BeamParams {
  int n = 4;
  // Costs within tie_tol of each other are "equal" for diversity pruning.
  double tie_tol = 0.0;
};

// Tolerance used when none is configured: 0 for occupancy grids (integer
// costs), 1e-6 for scalar grids.
double default_tie_tol(GridKind kind);

long long path_distance(const Eigen::ArrayXi& a, const Eigen::ArrayXi& b);
long long path_distance(const Path2D& a, const Path2D& b);

// Top-n selection that keeps mutually distant candidates among cost ties.
//
// With T the n-th cheapest cost, A = {cost < T - tol} is kept outright and
// the free slots are filled from B = {|cost - T| <= tol}: one slot takes the
// medoid of B; several slots seed with the member of B farthest (by total
// distance) from the rest and then greedily add the member with the largest
// minimum distance to those already chosen. Ties go to the lower candidate
// index. Returns indices ordered by (cost, index).
template <typename Distance>
std::vector<int> select_diverse(std::span<const double> costs, Distance&& distance, int n, double tie_tol) {
  const int count = static_cast<int>(costs.size());
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  auto by_cost = [&](int a, int b) { return costs[a] < costs[b] || (costs[a] == costs[b] && a < b); };
  std::sort(order.begin(), order.end(), by_cost);
  if (count <= n) return order;

  const double threshold = costs[order[n - 1]];
  std::vector<int> kept, tied, rest;
  for (int idx : order) {
    if (costs[idx] < threshold - tie_tol) {
      kept.push_back(idx);
    } else if (std::abs(costs[idx] - threshold) <= tie_tol) {
      tied.push_back(idx);
    } else {
      rest.push_back(idx);
    }
  }
  std::sort(tied.begin(), tied.end());

  const int need = n - static_cast<int>(kept.size());
  const int tied_count = static_cast<int>(tied.size());
  if (tied_count <= need) {
    kept.insert(kept.end(), tied.begin(), tied.end());
    for (std::size_t r = 0; r < rest.size() && static_cast<int>(kept.size()) < n; ++r) kept.push_back(rest[r]);
  } else {
    std::vector<double> totals(tied_count, 0.0);
    for (int a = 0; a < tied_count; ++a)
      for (int b = a + 1; b < tied_count; ++b) {
        const double d = static_cast<double>(distance(tied[a], tied[b]));
        totals[a] += d;
        totals[b] += d;
      }
    if (need == 1) {
      const auto medoid = std::min_element(totals.begin(), totals.end()) - totals.begin();
      kept.push_back(tied[medoid]);
    } else {
      std::vector<char> chosen(tied_count, 0);
      const auto seed = std::max_element(totals.begin(), totals.end()) - totals.begin();
      chosen[seed] = 1;
      kept.push_back(tied[seed]);
      std::vector<double> min_dist(tied_count);
      for (int b = 0; b < tied_count; ++b) min_dist[b] = static_cast<double>(distance(tied[b], tied[seed]));
      for (int picked = 1; picked < need; ++picked) {
        int best = -1;
        for (int b = 0; b < tied_count; ++b)
          if (!chosen[b] && (best < 0 || min_dist[b] > min_dist[best])) best = b;
        chosen[best] = 1;
        kept.push_back(tied[best]);
        for (int b = 0; b < tied_count; ++b)
          if (!chosen[b]) min_dist[b] = std::min(min_dist[b], static_cast<double>(distance(tied[b], tied[best])));
      }
    }
  }
  std::sort(kept.begin(), kept.end(), by_cost);
  return kept;
}

struct PathCandidate {
  Eigen::ArrayXi path;
  double cost = 0.0;
};

// select_diverse over explicit paths, with path_distance as the metric.
std::vector<PathCandidate> prune_with_diversity(std::span<const PathCandidate> candidates, int n, double tie_tol);

// Sum of map cells along the path, accumulated row 0 upward.
double path_cost(const EnergyMap2D& map, const Eigen::ArrayXi& values);

// Anchored beam search: rows are filled from anchor_row - 1 down to 0, then
// anchor_row + 1 up to h - 1; each extension tries offsets 0, -1, +1
// (clamped, duplicates dropped) and the beam is cut back to `n` with
// select_diverse after every row.
Path2D beam_search_2d(const EnergyMap2D& map, int anchor_row, int anchor_col, const BeamParams& params);

// Extends a 2D anchor path into a seam surface. The anchor path sits on
// slice `start_slice` of the reducing axis; slices are added toward 0 and
// then toward the far end. Each new slice path comes from a width-n beam
// search in which column t may only move one step from the neighbouring
// slice's path at t, and surfaces are cut back to n after every slice.
Seam lift_to_seam_3d(const EnergyField& field, const Path2D& anchor_path, int start_slice, Axis reducing,
                     const BeamParams& params);

// Exact minimum-cost anchored path by dynamic programming (h, w <= 16).
Path2D exhaustive_min_path(const EnergyMap2D& map, int anchor_row, int anchor_col);

}  // namespace carve3d
