#include "swarmengage/gridworld.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <string>

namespace swarmengage {

BinSet normalize(BinSet bins) {
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
  return bins;
}

std::vector<char> mask_of(const BinSet& bins, std::size_t m) {
  std::vector<char> mask(m, 0);
  for (Bin b : bins) {
    if (b < m) mask[b] = 1;
  }
  return mask;
}

bool contains(const BinSet& bins, Bin b) {
  return std::binary_search(bins.begin(), bins.end(), b);
}

GridSpec::GridSpec(std::vector<std::size_t> dims, BinSet obstacles,
                   BinSet base_bins)
    : dims_(std::move(dims)),
      obstacles_(normalize(std::move(obstacles))),
      base_(normalize(std::move(base_bins))) {
  if (dims_.size() != 2 && dims_.size() != 3) {
    throw ConfigError("grid dims must have 2 or 3 entries");
  }
  bin_count_ = 1;
  for (std::size_t d : dims_) {
    if (d == 0) throw ConfigError("grid dims must be positive");
    bin_count_ *= d;
  }
  for (Bin b : obstacles_) {
    if (b >= bin_count_) throw ConfigError("obstacle bin out of range");
  }
  if (base_.empty()) throw ConfigError("base must contain at least one bin");
  for (Bin b : base_) {
    if (b >= bin_count_) throw ConfigError("base bin out of range");
  }
  obstacle_mask_ = mask_of(obstacles_, bin_count_);
  base_mask_ = mask_of(base_, bin_count_);
  for (Bin b : base_) {
    if (obstacle_mask_[b]) {
      throw ConfigError("base bin " + std::to_string(b) + " is an obstacle");
    }
  }
}

Bin GridSpec::linear_index(const std::vector<std::size_t>& coords) const {
  if (coords.size() != dims_.size()) {
    throw ConfigError("coordinate rank does not match grid rank");
  }
  Bin idx = 0;
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    if (coords[a] >= dims_[a]) throw ConfigError("coordinate out of range");
    idx = idx * dims_[a] + coords[a];
  }
  return idx;
}

std::vector<std::size_t> GridSpec::coords(Bin b) const {
  std::vector<std::size_t> c(dims_.size());
  for (std::size_t a = dims_.size(); a-- > 0;) {
    c[a] = b % dims_[a];
    b /= dims_[a];
  }
  return c;
}

BinSet GridSpec::box(const std::vector<std::size_t>& lo,
                     const std::vector<std::size_t>& hi) const {
  if (lo.size() != dims_.size() || hi.size() != dims_.size()) {
    throw ConfigError("box rank does not match grid rank");
  }
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    if (lo[a] > hi[a] || hi[a] >= dims_[a]) {
      throw ConfigError("box bounds out of range or inverted");
    }
  }
  BinSet out;
  std::vector<std::size_t> cur = lo;
  while (true) {
    out.push_back(linear_index(cur));
    std::size_t a = dims_.size();
    while (a-- > 0) {
      if (cur[a] < hi[a]) {
        ++cur[a];
        break;
      }
      cur[a] = lo[a];
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  return normalize(std::move(out));
}

BinSet GridSpec::free_bins() const {
  BinSet out;
  for (Bin b = 0; b < bin_count_; ++b) {
    if (!obstacle_mask_[b]) out.push_back(b);
  }
  return out;
}

AdjacencyMatrix::AdjacencyMatrix(std::vector<std::vector<Bin>> successors,
                                 std::vector<char> blocked)
    : successors_(std::move(successors)),
      predecessors_(successors_.size()),
      blocked_(std::move(blocked)) {
  const std::size_t m = successors_.size();
  if (blocked_.size() != m) throw DimensionMismatch("blocked mask size");
  for (Bin i = 0; i < m; ++i) {
    auto& s = successors_[i];
    s = normalize(std::move(s));
    s.erase(std::remove(s.begin(), s.end(), i), s.end());
    if (blocked_[i]) s.clear();
    std::erase_if(s, [&](Bin j) { return j >= m || blocked_[j]; });
    for (Bin j : s) predecessors_[j].push_back(i);
  }
}

bool AdjacencyMatrix::allowed(Bin from, Bin to) const {
  if (blocked_[from] || blocked_[to]) return false;
  if (from == to) return true;
  return contains(successors_[from], to);
}

BinSet AdjacencyMatrix::free_bins() const {
  BinSet out;
  for (Bin b = 0; b < size(); ++b) {
    if (!blocked_[b]) out.push_back(b);
  }
  return out;
}

BinSet BoundaryLayers::inside(std::size_t p) const {
  BinSet out = base;
  for (std::size_t q = 1; q < p && q <= layers.size(); ++q) {
    out.insert(out.end(), layers[q - 1].begin(), layers[q - 1].end());
  }
  return normalize(std::move(out));
}

AdjacencyMatrix build_grid_adjacency(const GridSpec& grid) {
  const std::size_t m = grid.bin_count();
  const auto& dims = grid.dims();
  std::vector<std::vector<Bin>> succ(m);
  std::vector<char> blocked(m, 0);
  for (Bin b = 0; b < m; ++b) {
    if (grid.is_obstacle(b)) {
      blocked[b] = 1;
      continue;
    }
    auto c = grid.coords(b);
    for (std::size_t a = 0; a < dims.size(); ++a) {
      for (int delta : {-1, 1}) {
        if (delta < 0 && c[a] == 0) continue;
        if (delta > 0 && c[a] + 1 >= dims[a]) continue;
        auto n = c;
        n[a] = delta < 0 ? c[a] - 1 : c[a] + 1;
        Bin nb = grid.linear_index(n);
        if (!grid.is_obstacle(nb)) succ[b].push_back(nb);
      }
    }
  }
  return AdjacencyMatrix(std::move(succ), std::move(blocked));
}

namespace {

// Bins of `bins` reachable from `start` inside the induced subgraph.
std::vector<char> reach_within(const AdjacencyMatrix& adj,
                               const std::vector<char>& in_set, Bin start,
                               bool forward) {
  std::vector<char> seen(adj.size(), 0);
  std::deque<Bin> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    Bin u = queue.front();
    queue.pop_front();
    const auto& next = forward ? adj.successors(u) : adj.predecessors(u);
    for (Bin v : next) {
      if (in_set[v] && !seen[v]) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_strongly_connected(const AdjacencyMatrix& adj, const BinSet& bins) {
  if (bins.empty()) return false;
  auto in_set = mask_of(bins, adj.size());
  for (Bin b : bins) {
    if (b >= adj.size() || adj.blocked(b)) return false;
  }
  auto fwd = reach_within(adj, in_set, bins.front(), true);
  auto bwd = reach_within(adj, in_set, bins.front(), false);
  for (Bin b : bins) {
    if (!fwd[b] || !bwd[b]) return false;
  }
  return true;
}

std::vector<BinSet> connected_components(const AdjacencyMatrix& adj,
                                         const BinSet& bins) {
  const std::size_t m = adj.size();
  auto in_set = mask_of(bins, m);
  // Kosaraju: finish order on the forward graph, then sweep the reverse.
  std::vector<char> visited(m, 0);
  std::vector<Bin> order;
  for (Bin s : bins) {
    if (visited[s]) continue;
    std::vector<std::pair<Bin, std::size_t>> stack{{s, 0}};
    visited[s] = 1;
    while (!stack.empty()) {
      auto& [u, k] = stack.back();
      const auto& next = adj.successors(u);
      if (k < next.size()) {
        Bin v = next[k++];
        if (in_set[v] && !visited[v]) {
          visited[v] = 1;
          stack.push_back({v, 0});
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<char> assigned(m, 0);
  std::vector<BinSet> comps;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (assigned[*it]) continue;
    BinSet comp;
    std::deque<Bin> queue{*it};
    assigned[*it] = 1;
    while (!queue.empty()) {
      Bin u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (Bin v : adj.predecessors(u)) {
        if (in_set[v] && !assigned[v]) {
          assigned[v] = 1;
          queue.push_back(v);
        }
      }
    }
    comps.push_back(normalize(std::move(comp)));
  }
  std::sort(comps.begin(), comps.end(),
            [](const BinSet& a, const BinSet& b) { return a.front() < b.front(); });
  return comps;
}

std::vector<int> distances_to(const AdjacencyMatrix& adj,
                              const BinSet& targets) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<Bin> queue;
  for (Bin t : targets) {
    if (t < adj.size() && !adj.blocked(t) && dist[t] < 0) {
      dist[t] = 0;
      queue.push_back(t);
    }
  }
  // Walk edges backwards: a predecessor of u is one move away from u.
  while (!queue.empty()) {
    Bin u = queue.front();
    queue.pop_front();
    for (Bin v : adj.predecessors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

BoundaryLayers compute_boundary_layers(const AdjacencyMatrix& adj,
                                       const BinSet& base) {
  if (base.empty()) throw ConfigError("base set is empty");
  BoundaryLayers out;
  out.base = normalize(base);
  for (Bin b : out.base) {
    if (b >= adj.size() || adj.blocked(b)) {
      throw ConfigError("base bin is blocked or out of range");
    }
  }
  out.distance = distances_to(adj, out.base);
  int far = 0;
  for (int d : out.distance) far = std::max(far, d);
  out.layers.resize(static_cast<std::size_t>(far));
  for (Bin b = 0; b < adj.size(); ++b) {
    int d = out.distance[b];
    if (d > 0) out.layers[static_cast<std::size_t>(d - 1)].push_back(b);
  }
  return out;
}

std::vector<Bin> shortest_path_next_hop(const AdjacencyMatrix& adj,
                                        const BinSet& targets) {
  if (targets.empty()) throw InfeasibleError("next hop: empty target set");
  auto dist = distances_to(adj, targets);
  std::vector<Bin> hop(adj.size(), kNoBin);
  for (Bin i = 0; i < adj.size(); ++i) {
    if (adj.blocked(i)) continue;
    if (dist[i] < 0) {
      throw InfeasibleError("bin " + std::to_string(i) +
                            " cannot reach the target set");
    }
    if (dist[i] == 0) {
      hop[i] = i;
      continue;
    }
    // successors are ascending, so the first match is the smallest index
    for (Bin j : adj.successors(i)) {
      if (dist[j] == dist[i] - 1) {
        hop[i] = j;
        break;
      }
    }
  }
  return hop;
}

}  // namespace swarmengage
