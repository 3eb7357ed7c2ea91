#pragma once

#include <cstddef>
#include <vector>

#include "swarmengage/types.hpp"

namespace swarmengage {

/// Binned operational region: a 2D or 3D box of bins with obstacle and base
/// index sets.
class GridSpec {
 public:
  GridSpec(std::vector<std::size_t> dims, BinSet obstacles, BinSet base_bins);

  const std::vector<std::size_t>& dims() const { return dims_; }
  const BinSet& obstacles() const { return obstacles_; }
  const BinSet& base_bins() const { return base_; }
  std::size_t bin_count() const { return bin_count_; }
  bool is_obstacle(Bin b) const { return obstacle_mask_[b] != 0; }
  bool is_base(Bin b) const { return base_mask_[b] != 0; }

  Bin linear_index(const std::vector<std::size_t>& coords) const;
  std::vector<std::size_t> coords(Bin b) const;

  /// All bins of the inclusive axis-aligned box [lo, hi].
  BinSet box(const std::vector<std::size_t>& lo,
             const std::vector<std::size_t>& hi) const;

  /// Non-obstacle bins.
  BinSet free_bins() const;

 private:
  std::vector<std::size_t> dims_;
  BinSet obstacles_;
  BinSet base_;
  std::size_t bin_count_ = 0;
  std::vector<char> obstacle_mask_;
  std::vector<char> base_mask_;
};

/// Allowed one-step transitions. allowed(i, j) means an agent in bin i may
/// move to bin j. Self transitions are allowed for every non-obstacle bin;
/// obstacle bins have no transitions at all.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  /// `successors[i]` lists the bins j != i reachable from i in one step.
  AdjacencyMatrix(std::vector<std::vector<Bin>> successors,
                  std::vector<char> blocked);

  std::size_t size() const { return successors_.size(); }
  bool blocked(Bin i) const { return blocked_[i] != 0; }
  bool allowed(Bin from, Bin to) const;
  /// Neighbors of `from` excluding `from` itself, ascending.
  const std::vector<Bin>& successors(Bin from) const { return successors_[from]; }
  /// Bins that can move to `to` in one step, excluding `to`, ascending.
  const std::vector<Bin>& predecessors(Bin to) const { return predecessors_[to]; }
  BinSet free_bins() const;

 private:
  std::vector<std::vector<Bin>> successors_;
  std::vector<std::vector<Bin>> predecessors_;
  std::vector<char> blocked_;
};

/// Base set together with the BFS rings around it. layers[0] is the set at
/// graph distance 1 from the base, layers[1] at distance 2, and so on.
struct BoundaryLayers {
  BinSet base;
  std::vector<BinSet> layers;
  /// Per-bin distance to the base; -1 for obstacles and unreachable bins.
  std::vector<int> distance;

  std::size_t count() const { return layers.size(); }
  /// Layer at distance p (p >= 1).
  const BinSet& layer(std::size_t p) const { return layers.at(p - 1); }
  /// Base plus every layer strictly closer than p.
  BinSet inside(std::size_t p) const;
};

AdjacencyMatrix build_grid_adjacency(const GridSpec& grid);

bool is_strongly_connected(const AdjacencyMatrix& adj, const BinSet& bins);

/// Strongly connected components of the subgraph induced on `bins`, each
/// sorted, ordered by smallest member.
std::vector<BinSet> connected_components(const AdjacencyMatrix& adj,
                                         const BinSet& bins);

/// Multi-source BFS distances toward `targets` along allowed transitions
/// (distance of i is the fewest moves from i into the target set). -1 when
/// a bin cannot reach the set.
std::vector<int> distances_to(const AdjacencyMatrix& adj, const BinSet& targets);

BoundaryLayers compute_boundary_layers(const AdjacencyMatrix& adj,
                                       const BinSet& base);

inline constexpr Bin kNoBin = static_cast<Bin>(-1);

/// One shortest-path step toward `targets`, indexed by bin. Ties go to the
/// smallest bin index, target bins map to themselves and obstacles map to
/// kNoBin. Throws InfeasibleError if a free bin cannot reach the targets.
std::vector<Bin> shortest_path_next_hop(const AdjacencyMatrix& adj,
                                        const BinSet& targets);

}  // namespace swarmengage
