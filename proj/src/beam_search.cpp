#include "carve3d/beam_search.hpp"

#include <limits>
#include <string>

namespace carve3d {

namespace {

constexpr int kOffsets[3] = {0, -1, 1};

struct Node {
  int parent;
  int value;
};

struct Member {
  double cost;
  int value;
  int node;
};

struct Child {
  double cost;
  int value;
  int parent;
};

// Cutting-axis values reachable from `base` with one step, in offset order
// 0, -1, +1, clamped to [0, width) and deduplicated.
int step_targets(int base, int width, int out[3]) {
  int count = 0;
  for (int off : kOffsets) {
    const int y = std::clamp(base + off, 0, width - 1);
    bool seen = false;
    for (int c = 0; c < count; ++c) seen = seen || out[c] == y;
    if (!seen) out[count++] = y;
  }
  return count;
}

// Beams up to this width keep a pairwise distance matrix; wider ones walk
// node chains on demand instead of paying O(n^2) memory per row.
constexpr std::size_t kMatrixLimit = 256;

// Beam members with their pairwise path distances (empty matrix when wide).
struct BeamStep {
  std::vector<Member> members;
  std::vector<long long> dist;

  long long distance(const std::vector<Node>& nodes, int a, int b) const {
    if (!dist.empty()) return dist[std::size_t(a) * members.size() + b];
    long long d = 0;
    // members share a depth; stop at the first common ancestor
    for (int na = members[a].node, nb = members[b].node; na != nb; na = nodes[na].parent, nb = nodes[nb].parent)
      d += std::abs(nodes[na].value - nodes[nb].value);
    return d;
  }
};

void advance(BeamStep& beam, const std::vector<Child>& children, std::vector<Node>& nodes,
             const BeamParams& params) {
  std::vector<double> costs(children.size());
  for (std::size_t c = 0; c < children.size(); ++c) costs[c] = children[c].cost;
  auto child_distance = [&](int a, int b) {
    const Child& ca = children[a];
    const Child& cb = children[b];
    return beam.distance(nodes, ca.parent, cb.parent) + std::abs(ca.value - cb.value);
  };
  const auto keep = select_diverse(std::span<const double>(costs), child_distance, params.n, params.tie_tol);

  BeamStep next;
  next.members.reserve(keep.size());
  const bool matrix = keep.size() <= kMatrixLimit;
  if (matrix) next.dist.assign(keep.size() * keep.size(), 0);
  for (std::size_t a = 0; a < keep.size(); ++a) {
    const Child& c = children[keep[a]];
    if (matrix)
      for (std::size_t b = 0; b < a; ++b) {
        const long long d = child_distance(keep[a], keep[b]);
        next.dist[a * keep.size() + b] = d;
        next.dist[b * keep.size() + a] = d;
      }
    nodes.push_back({beam.members[c.parent].node, c.value});
    next.members.push_back({c.cost, c.value, static_cast<int>(nodes.size()) - 1});
  }
  beam = std::move(next);
}

void check_params(const BeamParams& params) {
  if (params.n < 1) throw PreconditionError("beam width must be at least 1");
  if (!(params.tie_tol >= 0.0)) throw PreconditionError("tie tolerance must be non-negative");
}

}  // namespace

double default_tie_tol(GridKind kind) { return kind == GridKind::Occupancy ? 0.0 : 1e-6; }

long long path_distance(const Eigen::ArrayXi& a, const Eigen::ArrayXi& b) {
  if (a.size() != b.size()) throw PreconditionError("path_distance needs paths of equal length");
  return (a - b).abs().cast<long long>().sum();
}

long long path_distance(const Path2D& a, const Path2D& b) { return path_distance(a.values, b.values); }

std::vector<PathCandidate> prune_with_diversity(std::span<const PathCandidate> candidates, int n, double tie_tol) {
  if (candidates.empty()) throw PreconditionError("prune_with_diversity needs candidates");
  if (n < 1) throw PreconditionError("beam width must be at least 1");
  std::vector<double> costs(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) costs[c] = candidates[c].cost;
  auto distance = [&](int a, int b) { return path_distance(candidates[a].path, candidates[b].path); };
  const auto keep = select_diverse(std::span<const double>(costs), distance, n, tie_tol);
  std::vector<PathCandidate> out;
  out.reserve(keep.size());
  for (int idx : keep) out.push_back(candidates[idx]);
  return out;
}

double path_cost(const EnergyMap2D& map, const Eigen::ArrayXi& values) {
  if (values.size() != map.rows()) throw PreconditionError("path length does not match the map");
  double total = 0.0;
  for (Eigen::Index x = 0; x < values.size(); ++x) {
    if (values[x] < 0 || values[x] >= map.cols()) throw BoundsError("path value outside the map");
    total += map(x, values[x]);
  }
  return total;
}

Path2D beam_search_2d(const EnergyMap2D& map, int anchor_row, int anchor_col, const BeamParams& params) {
  check_params(params);
  const int h = static_cast<int>(map.rows());
  const int w = static_cast<int>(map.cols());
  if (anchor_row < 0 || anchor_row >= h || anchor_col < 0 || anchor_col >= w)
    throw BoundsError("anchor (" + std::to_string(anchor_row) + ", " + std::to_string(anchor_col) +
                      ") outside the energy map");

  std::vector<int> rows;
  rows.reserve(h - 1);
  for (int x = anchor_row - 1; x >= 0; --x) rows.push_back(x);
  for (int x = anchor_row + 1; x < h; ++x) rows.push_back(x);

  BeamStep beam;
  beam.members.push_back({map(anchor_row, anchor_col), anchor_col, -1});
  beam.dist.assign(1, 0);
  std::vector<Node> nodes;
  nodes.reserve(rows.size() * params.n);
  std::vector<Child> children;

  for (int x : rows) {
    children.clear();
    for (std::size_t p = 0; p < beam.members.size(); ++p) {
      const Member& m = beam.members[p];
      const int base = x == anchor_row + 1 ? anchor_col : m.value;
      int targets[3];
      const int count = step_targets(base, w, targets);
      for (int t = 0; t < count; ++t) children.push_back({m.cost + map(x, targets[t]), targets[t], int(p)});
    }
    advance(beam, children, nodes, params);
  }

  Path2D out;
  out.anchor_row = anchor_row;
  out.anchor_col = anchor_col;
  out.values = Eigen::ArrayXi::Zero(h);
  out.values[anchor_row] = anchor_col;
  int node = beam.members.front().node;
  for (auto r = rows.rbegin(); r != rows.rend(); ++r) {
    out.values[*r] = nodes[node].value;
    node = nodes[node].parent;
  }
  out.cost = path_cost(map, out.values);
  return out;
}

namespace {

// Energy of one slice of the field as a (main, cutting) map without copying.
struct SliceView {
  const double* data;
  Eigen::Index stride;

  double operator()(int t, int y) const { return data[t * stride + y]; }
};

SliceView slice_view(const EnergyField& field, Axis reducing, int slice) {
  const Eigen::Index nk = field.nk();
  if (reducing == Axis::X) return {field.data().data() + Eigen::Index(slice) * field.nj() * nk, nk};
  return {field.data().data() + Eigen::Index(slice) * nk, Eigen::Index(field.nj()) * nk};
}

struct SlicePaths {
  std::vector<Eigen::ArrayXi> paths;
  std::vector<double> costs;
};

// Width-n beam search over one slice, column t restricted to base[t] + {0, -1, +1}
// and one step from the path's previous column.
SlicePaths constrained_slice_search(const SliceView& energy, const Eigen::ArrayXi& base, int width,
                                    const BeamParams& params) {
  const int h = static_cast<int>(base.size());
  std::vector<Node> nodes;
  nodes.reserve(std::size_t(h) * params.n);
  std::vector<Child> children;

  // Virtual root: no cost, no constraint from a previous column.
  BeamStep beam;
  beam.members.push_back({0.0, -1, -1});
  beam.dist.assign(1, 0);
  for (int t = 0; t < h; ++t) {
    children.clear();
    for (std::size_t p = 0; p < beam.members.size(); ++p) {
      const Member& m = beam.members[p];
      int targets[3];
      const int count = step_targets(base[t], width, targets);
      for (int c = 0; c < count; ++c) {
        const int y = targets[c];
        if (m.value >= 0 && std::abs(y - m.value) > 1) continue;
        children.push_back({m.cost + energy(t, y), y, int(p)});
      }
    }
    advance(beam, children, nodes, params);
  }

  SlicePaths out;
  out.paths.reserve(beam.members.size());
  for (const Member& m : beam.members) {
    Eigen::ArrayXi path(h);
    int node = m.node;
    for (int t = h - 1; t >= 0; --t) {
      path[t] = nodes[node].value;
      node = nodes[node].parent;
    }
    out.paths.push_back(std::move(path));
    out.costs.push_back(m.cost);
  }
  return out;
}

struct SurfaceNode {
  int parent;
  int slice;
  Eigen::ArrayXi path;
};

struct SurfaceChild {
  double cost;
  int parent;
  const Eigen::ArrayXi* path;
};

}  // namespace

Seam lift_to_seam_3d(const EnergyField& field, const Path2D& anchor_path, int start_slice, Axis reducing,
                     const BeamParams& params) {
  check_params(params);
  if (reducing == Axis::Z) throw PreconditionError("the cutting axis cannot be the reducing axis");
  const int extent = reducing == Axis::X ? field.ni() : field.nj();
  const int main = reducing == Axis::X ? field.nj() : field.ni();
  const int width = field.nk();
  if (anchor_path.values.size() != main) throw PreconditionError("anchor path length does not match the main axis");
  if (start_slice < 0 || start_slice >= extent) throw PreconditionError("start slice outside the reducing axis");
  if (main > 0 && (anchor_path.values.minCoeff() < 0 || anchor_path.values.maxCoeff() >= width))
    throw PreconditionError("anchor path leaves the cutting axis range");

  std::vector<int> slices;
  for (int s = start_slice - 1; s >= 0; --s) slices.push_back(s);
  for (int s = start_slice + 1; s < extent; ++s) slices.push_back(s);

  std::vector<SurfaceNode> nodes;
  nodes.reserve(slices.size() * params.n + 1);
  nodes.push_back({-1, start_slice, anchor_path.values});
  double start_cost = 0.0;
  {
    const SliceView view = slice_view(field, reducing, start_slice);
    for (int t = 0; t < main; ++t) start_cost += view(t, anchor_path.values[t]);
  }

  BeamStep beam;
  beam.members.push_back({start_cost, 0, 0});
  beam.dist.assign(1, 0);

  std::vector<SlicePaths> expansions;
  std::vector<SurfaceChild> children;
  std::vector<double> costs;
  std::vector<long long> child_dist;
  for (int s : slices) {
    const SliceView view = slice_view(field, reducing, s);
    expansions.clear();
    children.clear();
    for (std::size_t p = 0; p < beam.members.size(); ++p) {
      const int base_node = s == start_slice + 1 ? 0 : beam.members[p].node;
      expansions.push_back(constrained_slice_search(view, nodes[base_node].path, width, params));
    }
    for (std::size_t p = 0; p < beam.members.size(); ++p)
      for (std::size_t r = 0; r < expansions[p].paths.size(); ++r)
        children.push_back({beam.members[p].cost + expansions[p].costs[r], int(p), &expansions[p].paths[r]});

    const std::size_t count = children.size();
    costs.resize(count);
    child_dist.assign(count * count, 0);
    for (std::size_t a = 0; a < count; ++a) {
      costs[a] = children[a].cost;
      for (std::size_t b = 0; b < a; ++b) {
        const long long d = beam.distance({}, children[a].parent, children[b].parent) +
                            path_distance(*children[a].path, *children[b].path);
        child_dist[a * count + b] = d;
        child_dist[b * count + a] = d;
      }
    }
    auto distance = [&](int a, int b) { return child_dist[std::size_t(a) * count + b]; };
    const auto keep = select_diverse(std::span<const double>(costs), distance, params.n, params.tie_tol);

    BeamStep next;
    next.dist.assign(keep.size() * keep.size(), 0);
    for (std::size_t a = 0; a < keep.size(); ++a) {
      const SurfaceChild& c = children[keep[a]];
      nodes.push_back({beam.members[c.parent].node, s, *c.path});
      next.members.push_back({c.cost, 0, static_cast<int>(nodes.size()) - 1});
      for (std::size_t b = 0; b < keep.size(); ++b) next.dist[a * keep.size() + b] = distance(keep[a], keep[b]);
    }
    beam = std::move(next);
  }

  Seam seam;
  seam.z = IndexMap::Zero(field.ni(), field.nj());
  for (int node = beam.members.front().node; node >= 0; node = nodes[node].parent) {
    const SurfaceNode& sn = nodes[node];
    for (int t = 0; t < main; ++t) {
      if (reducing == Axis::X) {
        seam.z(sn.slice, t) = sn.path[t];
      } else {
        seam.z(t, sn.slice) = sn.path[t];
      }
    }
  }
  const SeamCost cost = seam_cost(field, seam);
  seam.cost_total = cost.total;
  seam.cost_mean = cost.mean;
  return seam;
}

Path2D exhaustive_min_path(const EnergyMap2D& map, int anchor_row, int anchor_col) {
  const int h = static_cast<int>(map.rows());
  const int w = static_cast<int>(map.cols());
  if (h > 16 || w > 16) throw PreconditionError("exhaustive_min_path is limited to 16 x 16 maps");
  if (anchor_row < 0 || anchor_row >= h || anchor_col < 0 || anchor_col >= w)
    throw BoundsError("anchor outside the energy map");

  constexpr double inf = std::numeric_limits<double>::infinity();
  // best(x, y): cheapest cost of rows strictly between x and the anchor row
  // plus row x itself, with row x at column y, connected to the anchor.
  EnergyMap2D best = EnergyMap2D::Constant(h, w, inf);
  best(anchor_row, anchor_col) = 0.0;
  auto relax = [&](int x, int from) {
    for (int y = 0; y < w; ++y) {
      double b = inf;
      for (int d = -1; d <= 1; ++d) {
        const int yy = y + d;
        if (yy >= 0 && yy < w) b = std::min(b, best(from, yy));
      }
      best(x, y) = b + map(x, y);
    }
  };
  for (int x = anchor_row - 1; x >= 0; --x) relax(x, x + 1);
  for (int x = anchor_row + 1; x < h; ++x) relax(x, x - 1);

  Path2D out;
  out.anchor_row = anchor_row;
  out.anchor_col = anchor_col;
  out.values = Eigen::ArrayXi::Zero(h);
  out.values[anchor_row] = anchor_col;
  // Walk from each far end toward the anchor, preferring offsets 0, -1, +1.
  auto trace = [&](int end_row, int step) {
    if (end_row == anchor_row) return;
    Eigen::Index y0 = 0;
    best.row(end_row).minCoeff(&y0);
    int y = static_cast<int>(y0);
    for (int x = end_row; x != anchor_row; x += step) {
      out.values[x] = y;
      const int next_row = x + step;
      int chosen = -1;
      double chosen_cost = inf;
      for (int off : kOffsets) {
        const int yy = y + off;
        if (yy < 0 || yy >= w) continue;
        if (best(next_row, yy) < chosen_cost) {
          chosen = yy;
          chosen_cost = best(next_row, yy);
        }
      }
      y = chosen;
    }
  };
  trace(0, +1);
  trace(h - 1, -1);
  out.cost = path_cost(map, out.values);
  return out;
}

}  // namespace carve3d

namespace carve3d {

bool is_valid_path(const Path2D& path, int width) {
  const auto& v = path.values;
  if (path.anchor_row < 0 || path.anchor_row >= v.size() || v[path.anchor_row] != path.anchor_col) return false;
  if (v.size() == 0) return false;
  if (v.minCoeff() < 0 || v.maxCoeff() >= width) return false;
  for (Eigen::Index x = 0; x + 1 < v.size(); ++x)
    if (std::abs(v[x] - v[x + 1]) > 1) return false;
  return true;
}

bool is_valid_seam(const Seam& seam, int nk) {
  const auto& z = seam.z;
  if (z.size() == 0) return true;
  if (z.minCoeff() < 0 || z.maxCoeff() >= nk) return false;
  if (z.rows() > 1 && (z.topRows(z.rows() - 1) - z.bottomRows(z.rows() - 1)).abs().maxCoeff() > 1) return false;
  if (z.cols() > 1 && (z.leftCols(z.cols() - 1) - z.rightCols(z.cols() - 1)).abs().maxCoeff() > 1) return false;
  return true;
}

}  // namespace carve3d
