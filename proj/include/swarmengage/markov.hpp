#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

#include "swarmengage/gridworld.hpp"
#include "swarmengage/types.hpp"

namespace swarmengage {

/// Densities below this are treated as zero when classifying states.
inline constexpr double kDensityZero = 1e-12;

/// Probability vector over bins.
class DensityVector {
 public:
  DensityVector() = default;
  /// Throws SwarmError unless entries are nonnegative and sum to 1 within
  /// `tol`.
  explicit DensityVector(Eigen::VectorXd values, double tol = 1e-9);

  static DensityVector point(std::size_t m, Bin b);
  static DensityVector uniform_on(std::size_t m, const BinSet& bins);
  /// Normalizes a nonnegative vector with positive total mass.
  static DensityVector normalized(Eigen::VectorXd weights);

  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](Bin b) const { return values_[static_cast<Eigen::Index>(b)]; }
  double mass_on(const BinSet& bins) const;
  /// Bins with density above kDensityZero.
  BinSet support() const;

 private:
  Eigen::VectorXd values_;
};

/// Column-stochastic transition matrix: at(i, j) is the probability of
/// moving from bin j to bin i.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  /// Throws SwarmError on negative entries or column sums off by more than
  /// `tol`.
  explicit StochasticMatrix(Eigen::MatrixXd entries, double tol = 1e-10);

  static StochasticMatrix identity(std::size_t m);

  const Eigen::MatrixXd& entries() const { return entries_; }
  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  double at(Bin to, Bin from) const {
    return entries_(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from));
  }
  bool is_identity() const;

  /// True when every positive entry is an allowed transition. Obstacle bins
  /// may hold their unit self entry, which no density ever uses.
  bool respects(const AdjacencyMatrix& adj) const;

 private:
  Eigen::MatrixXd entries_;
};

struct StateClassification {
  BinSet recurrent;
  BinSet transient;
};

StateClassification classify_states(const DensityVector& v,
                                    const AdjacencyMatrix& adj);

DensityVector propagate(const StochasticMatrix& M, const DensityVector& x);

/// Applies `steps` transitions of M to x.
DensityVector propagate(const StochasticMatrix& M, const DensityVector& x,
                        std::size_t steps);

/// Forward product: Ms[0] acts first, so the result is Ms[n-1] ... Ms[0].
/// An empty list yields the identity of size `m`.
StochasticMatrix compose(std::span<const StochasticMatrix> Ms, std::size_t m = 0);

/// Metropolis-Hastings chain on the support of v with shortest-path routing
/// from every transient bin. Requires the support of v to be strongly
/// connected.
StochasticMatrix synthesize(const DensityVector& v, const AdjacencyMatrix& adj);

/// Like synthesize, but the support of v may split into several strongly
/// connected pieces. Each piece gets its own Metropolis-Hastings block and
/// transient bins route mass so that a swarm starting from `start` ends up
/// with v's weight on every piece. Routing comes from a minimum-hop
/// transport of start's transient mass into each piece's deficit. Mass that
/// `start` already holds inside a piece stays there.
StochasticMatrix synthesize_from(const DensityVector& v,
                                 const AdjacencyMatrix& adj,
                                 const DensityVector& start);

/// Turns every bin in `absorbing` into a trap: its column becomes e_j.
StochasticMatrix make_absorbing(const StochasticMatrix& M, const BinSet& absorbing);

double tv_distance(const DensityVector& x, const DensityVector& y);
double l1_distance(const DensityVector& x, const DensityVector& y);

/// Debug dump: one matrix column per line, 17 significant digits.
void write_matrix_text(std::ostream& os, const StochasticMatrix& M);
StochasticMatrix read_matrix_text(std::istream& is);

}  // namespace swarmengage
