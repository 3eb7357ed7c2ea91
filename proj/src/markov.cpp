#include "swarmengage/markov.hpp"

#include <cmath>
#include <deque>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "swarmengage/transport.hpp"

namespace swarmengage {

DensityVector::DensityVector(Eigen::VectorXd values, double tol)
    : values_(std::move(values)) {
  if (values_.size() == 0) throw SwarmError("density vector is empty");
  if ((values_.array() < 0.0).any()) {
    // tiny negatives from rounding are clipped, anything else is an error
    if ((values_.array() < -tol).any()) {
      throw SwarmError("density vector has negative entries");
    }
    values_ = values_.cwiseMax(0.0);
  }
  if (std::abs(values_.sum() - 1.0) > tol) {
    std::ostringstream msg;
    msg << "density vector sums to " << std::setprecision(17) << values_.sum();
    throw SwarmError(msg.str());
  }
}

DensityVector DensityVector::point(std::size_t m, Bin b) {
  if (b >= m) throw DimensionMismatch("point mass outside the vector");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  x[static_cast<Eigen::Index>(b)] = 1.0;
  return DensityVector(std::move(x));
}

DensityVector DensityVector::uniform_on(std::size_t m, const BinSet& bins) {
  if (bins.empty()) throw SwarmError("uniform density on an empty set");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (Bin b : bins) {
    if (b >= m) throw DimensionMismatch("bin outside the vector");
    x[static_cast<Eigen::Index>(b)] = 1.0;
  }
  return normalized(std::move(x));
}

DensityVector DensityVector::normalized(Eigen::VectorXd weights) {
  if ((weights.array() < 0.0).any()) throw SwarmError("negative weight");
  double total = weights.sum();
  if (!(total > 0.0)) throw SwarmError("weights have no mass");
  weights /= total;
  return DensityVector(std::move(weights));
}

double DensityVector::mass_on(const BinSet& bins) const {
  double s = 0.0;
  for (Bin b : bins) s += (*this)[b];
  return s;
}

BinSet DensityVector::support() const {
  BinSet out;
  for (Bin b = 0; b < size(); ++b) {
    if ((*this)[b] > kDensityZero) out.push_back(b);
  }
  return out;
}

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries, double tol)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionMismatch("stochastic matrix must be square");
  }
  if ((entries_.array() < 0.0).any()) {
    throw SwarmError("stochastic matrix has negative entries");
  }
  Eigen::RowVectorXd sums = entries_.colwise().sum();
  for (Eigen::Index j = 0; j < sums.size(); ++j) {
    if (std::abs(sums[j] - 1.0) > tol) {
      std::ostringstream msg;
      msg << "column " << j << " sums to " << std::setprecision(17) << sums[j];
      throw SwarmError(msg.str());
    }
  }
}

StochasticMatrix StochasticMatrix::identity(std::size_t m) {
  auto n = static_cast<Eigen::Index>(m);
  return StochasticMatrix(Eigen::MatrixXd::Identity(n, n));
}

bool StochasticMatrix::is_identity() const {
  return entries_.isIdentity(0.0);
}

bool StochasticMatrix::respects(const AdjacencyMatrix& adj) const {
  if (adj.size() != size()) return false;
  for (Bin from = 0; from < size(); ++from) {
    for (Bin to = 0; to < size(); ++to) {
      if (at(to, from) == 0.0 || adj.allowed(from, to)) continue;
      // obstacle columns carry a unit self entry so the matrix stays stochastic
      if (from == to && adj.blocked(from) && at(to, from) == 1.0) continue;
      return false;
    }
  }
  return true;
}

StateClassification classify_states(const DensityVector& v,
                                    const AdjacencyMatrix& adj) {
  if (v.size() != adj.size()) throw DimensionMismatch("density vs adjacency");
  StateClassification out;
  for (Bin b = 0; b < v.size(); ++b) {
    if (adj.blocked(b)) continue;
    (v[b] > kDensityZero ? out.recurrent : out.transient).push_back(b);
  }
  return out;
}

DensityVector propagate(const StochasticMatrix& M, const DensityVector& x) {
  if (M.size() != x.size()) throw DimensionMismatch("propagate: sizes differ");
  return DensityVector(M.entries() * x.values());
}

DensityVector propagate(const StochasticMatrix& M, const DensityVector& x,
                        std::size_t steps) {
  if (M.size() != x.size()) throw DimensionMismatch("propagate: sizes differ");
  Eigen::VectorXd cur = x.values();
  for (std::size_t k = 0; k < steps; ++k) cur = M.entries() * cur;
  return DensityVector(std::move(cur));
}

StochasticMatrix compose(std::span<const StochasticMatrix> Ms, std::size_t m) {
  if (Ms.empty()) return StochasticMatrix::identity(m);
  Eigen::MatrixXd U = Ms.front().entries();
  for (std::size_t k = 1; k < Ms.size(); ++k) {
    if (Ms[k].size() != Ms.front().size()) {
      throw DimensionMismatch("compose: sizes differ");
    }
    U = Ms[k].entries() * U;
  }
  return StochasticMatrix(std::move(U));
}

namespace {

void check_target(const DensityVector& v, const AdjacencyMatrix& adj) {
  if (v.size() != adj.size()) throw DimensionMismatch("target vs adjacency");
  for (Bin b = 0; b < v.size(); ++b) {
    if (adj.blocked(b) && v[b] > 0.0) {
      throw InfeasibleError("target density has mass on obstacle bin " +
                            std::to_string(b));
    }
  }
}

bool block_is_periodic(const Eigen::MatrixXd& M, const BinSet& comp) {
  for (Bin i : comp) {
    auto ii = static_cast<Eigen::Index>(i);
    if (M(ii, ii) > 0.0) return false;
  }
  std::vector<long> level(static_cast<std::size_t>(M.rows()), -1);
  std::deque<Bin> queue{comp.front()};
  level[comp.front()] = 0;
  long g = 0;
  while (!queue.empty()) {
    Bin u = queue.front();
    queue.pop_front();
    for (Bin v : comp) {
      if (v == u || M(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) <= 0.0) {
        continue;
      }
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      } else {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return g > 1;
}

// Fills the columns of every recurrent bin. Each component is closed:
// Metropolis-Hastings with uniform proposals over in-component neighbors.
void fill_recurrent_blocks(Eigen::MatrixXd& M, const DensityVector& v,
                           const AdjacencyMatrix& adj,
                           const std::vector<BinSet>& comps) {
  const std::size_t m = adj.size();
  std::vector<long> comp_of(m, -1);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (Bin b : comps[c]) comp_of[b] = static_cast<long>(c);
  }
  std::vector<double> degree(m, 0.0);
  for (const auto& comp : comps) {
    for (Bin i : comp) {
      for (Bin j : adj.successors(i)) {
        if (comp_of[j] == comp_of[i]) degree[i] += 1.0;
      }
    }
  }
  for (const auto& comp : comps) {
    for (Bin i : comp) {
      auto ii = static_cast<Eigen::Index>(i);
      double moved = 0.0;
      for (Bin j : adj.successors(i)) {
        if (comp_of[j] != comp_of[i]) continue;
        double propose = 1.0 / degree[i];
        double back = adj.allowed(j, i) ? 1.0 / degree[j] : 0.0;
        double accept = std::min(1.0, (v[j] * back) / (v[i] * propose));
        double p = propose * accept;
        M(static_cast<Eigen::Index>(j), ii) = p;
        moved += p;
      }
      M(ii, ii) = std::max(0.0, 1.0 - moved);
    }
    if (comp.size() > 1 && block_is_periodic(M, comp)) {
      for (Bin i : comp) {
        for (Bin j : comp) {
          M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) *= 0.5;
        }
        M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += 0.5;
      }
    }
  }
}

void fill_next_hop_columns(Eigen::MatrixXd& M, const AdjacencyMatrix& adj,
                           const StateClassification& states,
                           const std::vector<char>& done) {
  auto hop = shortest_path_next_hop(adj, states.recurrent);
  for (Bin j : states.transient) {
    if (done[j]) continue;
    M(static_cast<Eigen::Index>(hop[j]), static_cast<Eigen::Index>(j)) = 1.0;
  }
}

Eigen::MatrixXd blank_with_obstacles(const AdjacencyMatrix& adj) {
  auto n = static_cast<Eigen::Index>(adj.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  // obstacle columns are never reached but must still be stochastic
  for (Bin b = 0; b < adj.size(); ++b) {
    if (adj.blocked(b)) {
      M(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = 1.0;
    }
  }
  return M;
}

}  // namespace

StochasticMatrix synthesize(const DensityVector& v, const AdjacencyMatrix& adj) {
  check_target(v, adj);
  auto states = classify_states(v, adj);
  if (states.recurrent.empty()) throw InfeasibleError("target has no support");
  if (!is_strongly_connected(adj, states.recurrent)) {
    throw DisconnectedRecurrentStates(
        "support of the target distribution is not strongly connected");
  }
  Eigen::MatrixXd M = blank_with_obstacles(adj);
  fill_recurrent_blocks(M, v, adj, {states.recurrent});
  fill_next_hop_columns(M, adj, states, std::vector<char>(adj.size(), 0));
  return StochasticMatrix(std::move(M));
}

StochasticMatrix synthesize_from(const DensityVector& v,
                                 const AdjacencyMatrix& adj,
                                 const DensityVector& start) {
  check_target(v, adj);
  if (start.size() != adj.size()) throw DimensionMismatch("start vs adjacency");
  auto states = classify_states(v, adj);
  if (states.recurrent.empty()) throw InfeasibleError("target has no support");
  auto comps = connected_components(adj, states.recurrent);

  const std::size_t m = adj.size();
  Eigen::MatrixXd M = blank_with_obstacles(adj);
  fill_recurrent_blocks(M, v, adj, comps);

  const std::size_t C = comps.size();
  std::vector<double> deficit(C, 0.0);
  double deficit_total = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    deficit[c] = std::max(0.0, v.mass_on(comps[c]) - start.mass_on(comps[c]));
    deficit_total += deficit[c];
  }
  double supply_total = 0.0;
  for (Bin b : states.transient) supply_total += start[b];

  std::vector<char> routed(m, 0);
  if (supply_total > kDensityZero && deficit_total > kDensityZero) {
    // nodes: bins, then source and sink. Recurrent bins are sinks whose
    // demand splits their component's deficit in proportion to v.
    const std::size_t source = m;
    const std::size_t sink = m + 1;
    MinCostFlow net(sink + 1);
    struct Route {
      Bin from;
      Bin to;
      std::size_t arc;
    };
    std::vector<Route> routes;
    for (Bin i : states.transient) {
      if (start[i] > 0.0) net.add_arc(source, i, start[i], 0);
      for (Bin j : adj.successors(i)) {
        routes.push_back({i, j, net.add_arc(i, j, MinCostFlow::kUnbounded, 1)});
      }
    }
    const double scale = supply_total / deficit_total;
    for (std::size_t c = 0; c < C; ++c) {
      if (deficit[c] <= 0.0) continue;
      const double weight = v.mass_on(comps[c]);
      for (Bin j : comps[c]) {
        net.add_arc(j, sink, deficit[c] * scale * v[j] / weight, 0);
      }
    }
    net.solve(source, sink);

    std::vector<double> outflow(m, 0.0);
    for (const auto& r : routes) outflow[r.from] += net.flow(r.arc);
    for (const auto& r : routes) {
      double f = net.flow(r.arc);
      if (f <= 0.0 || outflow[r.from] <= kDensityZero * 1e-3) continue;
      M(static_cast<Eigen::Index>(r.to), static_cast<Eigen::Index>(r.from)) +=
          f / outflow[r.from];
      routed[r.from] = 1;
    }
    for (Bin i : states.transient) {
      if (!routed[i]) continue;
      // renormalize away rounding in the flow ratios
      auto col = M.col(static_cast<Eigen::Index>(i));
      col /= col.sum();
    }
  }
  fill_next_hop_columns(M, adj, states, routed);
  return StochasticMatrix(std::move(M));
}

StochasticMatrix make_absorbing(const StochasticMatrix& M, const BinSet& absorbing) {
  Eigen::MatrixXd out = M.entries();
  for (Bin j : absorbing) {
    if (j >= M.size()) throw DimensionMismatch("absorbing bin out of range");
    auto jj = static_cast<Eigen::Index>(j);
    out.col(jj).setZero();
    out(jj, jj) = 1.0;
  }
  return StochasticMatrix(std::move(out));
}

double tv_distance(const DensityVector& x, const DensityVector& y) {
  if (x.size() != y.size()) throw DimensionMismatch("tv_distance: sizes differ");
  return (x.values() - y.values()).cwiseMax(0.0).sum();
}

double l1_distance(const DensityVector& x, const DensityVector& y) {
  if (x.size() != y.size()) throw DimensionMismatch("l1_distance: sizes differ");
  return (x.values() - y.values()).cwiseAbs().sum();
}

void write_matrix_text(std::ostream& os, const StochasticMatrix& M) {
  os << std::setprecision(17);
  const auto& E = M.entries();
  for (Eigen::Index j = 0; j < E.cols(); ++j) {
    for (Eigen::Index i = 0; i < E.rows(); ++i) {
      if (i) os << ' ';
      os << E(i, j);
    }
    os << '\n';
  }
}

StochasticMatrix read_matrix_text(std::istream& is) {
  std::vector<std::vector<double>> cols;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> col;
    double x;
    while (ls >> x) col.push_back(x);
    cols.push_back(std::move(col));
  }
  auto n = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd E(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (static_cast<Eigen::Index>(cols[static_cast<std::size_t>(j)].size()) != n) {
      throw DimensionMismatch("matrix text is not square");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      E(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
  }
  return StochasticMatrix(std::move(E));
}

}  // namespace swarmengage
