#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "swarmengage/markov.hpp"

namespace swarmengage {

/// Reproducible uniform sampler keyed by (seed, stream).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Realized positions of a finite swarm. Agent identity is list position.
class SwarmState {
 public:
  SwarmState() = default;
  SwarmState(std::size_t bin_count, std::vector<Bin> agent_bins);

  const std::vector<Bin>& agent_bins() const { return agent_bins_; }
  const std::vector<long>& counts() const { return counts_; }
  std::size_t population() const { return agent_bins_.size(); }
  std::size_t bin_count() const { return counts_.size(); }
  long count(Bin b) const { return counts_[b]; }

 private:
  std::vector<Bin> agent_bins_;
  std::vector<long> counts_;
};

/// Cumulative column tables for inverse-CDF sampling from a stochastic
/// matrix. Building this once per matrix keeps per-agent sampling cheap.
class TransitionSampler {
 public:
  explicit TransitionSampler(const StochasticMatrix& M);
  /// Destination for an agent in `from` given z in [0, 1). Intervals are
  /// half-open [lo, hi); the last positive entry also takes z at its top.
  Bin sample(Bin from, double z) const;

 private:
  std::vector<std::vector<Bin>> targets_;
  std::vector<std::vector<double>> upper_;
};

SwarmState step_agents(const SwarmState& swarm, const StochasticMatrix& M,
                       RngStream& rng);
SwarmState step_agents(const SwarmState& swarm, const TransitionSampler& sampler,
                       RngStream& rng);

/// Counts divided by population. Throws SwarmError for an empty swarm.
DensityVector empirical_distribution(const SwarmState& swarm);

/// N agents placed i.i.d. uniformly over `region`.
SwarmState spawn_uniform(std::size_t bin_count, const BinSet& region,
                         std::size_t N, RngStream& rng);

}  // namespace swarmengage
