#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace swarmengage {

/// Minimum-cost flow with real capacities and integer arc costs, solved by
/// successive shortest paths (Dijkstra on reduced costs). Arc costs must be
/// nonnegative.
class MinCostFlow {
 public:
  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  explicit MinCostFlow(std::size_t nodes);

  /// Returns the arc id.
  std::size_t add_arc(std::size_t from, std::size_t to, double capacity, long cost);

  /// Pushes up to `limit` units from `source` to `sink`; returns the amount
  /// sent. Flow below `eps` is treated as zero.
  double solve(std::size_t source, std::size_t sink, double limit = kUnbounded,
               double eps = 1e-15);

  double flow(std::size_t arc) const;
  std::size_t from(std::size_t arc) const { return arcs_[2 * arc + 1].to; }
  std::size_t to(std::size_t arc) const { return arcs_[2 * arc].to; }
  std::size_t arc_count() const { return arcs_.size() / 2; }
  double total_cost() const;

 private:
  struct Arc {
    std::size_t to;
    double residual;
    long cost;
  };
  std::size_t nodes_;
  std::vector<Arc> arcs_;  // arcs_[2k] forward, arcs_[2k+1] reverse
  std::vector<std::vector<std::size_t>> out_;
  std::vector<double> capacity_;
};

}  // namespace swarmengage
