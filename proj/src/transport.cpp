#include "swarmengage/transport.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace swarmengage {

MinCostFlow::MinCostFlow(std::size_t nodes) : nodes_(nodes), out_(nodes) {}

std::size_t MinCostFlow::add_arc(std::size_t from, std::size_t to,
                                 double capacity, long cost) {
  if (from >= nodes_ || to >= nodes_) throw std::out_of_range("arc endpoint");
  if (cost < 0) throw std::invalid_argument("negative arc cost");
  std::size_t id = arcs_.size() / 2;
  out_[from].push_back(arcs_.size());
  arcs_.push_back({to, capacity, cost});
  out_[to].push_back(arcs_.size());
  arcs_.push_back({from, 0.0, -cost});
  capacity_.push_back(capacity);
  return id;
}

double MinCostFlow::flow(std::size_t arc) const {
  return arcs_[2 * arc + 1].residual;
}

double MinCostFlow::total_cost() const {
  double c = 0.0;
  for (std::size_t k = 0; k < arc_count(); ++k) {
    c += flow(k) * static_cast<double>(arcs_[2 * k].cost);
  }
  return c;
}

double MinCostFlow::solve(std::size_t source, std::size_t sink, double limit,
                          double eps) {
  constexpr long kInf = std::numeric_limits<long>::max() / 4;
  std::vector<long> potential(nodes_, 0);
  std::vector<long> dist(nodes_);
  std::vector<std::size_t> via(nodes_);
  double sent = 0.0;
  while (limit - sent > eps) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(via.begin(), via.end(), static_cast<std::size_t>(-1));
    using Item = std::pair<long, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0;
    heap.push({0, source});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (std::size_t e : out_[u]) {
        const Arc& a = arcs_[e];
        if (a.residual <= eps) continue;
        long nd = d + a.cost + potential[u] - potential[a.to];
        if (nd < dist[a.to]) {
          dist[a.to] = nd;
          via[a.to] = e;
          heap.push({nd, a.to});
        }
      }
    }
    if (dist[sink] >= kInf) break;
    for (std::size_t v = 0; v < nodes_; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }
    double push = limit - sent;
    for (std::size_t v = sink; v != source;) {
      std::size_t e = via[v];
      push = std::min(push, arcs_[e].residual);
      v = arcs_[e ^ 1].to;
    }
    for (std::size_t v = sink; v != source;) {
      std::size_t e = via[v];
      arcs_[e].residual -= push;
      arcs_[e ^ 1].residual += push;
      v = arcs_[e ^ 1].to;
    }
    sent += push;
  }
  return sent;
}

}  // namespace swarmengage
