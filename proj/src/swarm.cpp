#include "swarmengage/swarm.hpp"

#include <algorithm>

namespace swarmengage {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      engine_(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::below(std::size_t n) {
  // multiply-shift keeps this independent of the standard library's
  // distribution implementations
  auto r = static_cast<unsigned __int128>(engine_()) * n;
  return static_cast<std::size_t>(r >> 64);
}

SwarmState::SwarmState(std::size_t bin_count, std::vector<Bin> agent_bins)
    : agent_bins_(std::move(agent_bins)), counts_(bin_count, 0) {
  for (Bin b : agent_bins_) {
    if (b >= bin_count) throw DimensionMismatch("agent outside the grid");
    ++counts_[b];
  }
}

TransitionSampler::TransitionSampler(const StochasticMatrix& M)
    : targets_(M.size()), upper_(M.size()) {
  for (Bin from = 0; from < M.size(); ++from) {
    double acc = 0.0;
    for (Bin to = 0; to < M.size(); ++to) {
      double p = M.at(to, from);
      if (p <= 0.0) continue;
      acc += p;
      targets_[from].push_back(to);
      upper_[from].push_back(acc);
    }
  }
}

Bin TransitionSampler::sample(Bin from, double z) const {
  const auto& up = upper_[from];
  // first interval whose upper edge is strictly above z
  auto it = std::upper_bound(up.begin(), up.end(), z);
  if (it == up.end()) return targets_[from].back();
  return targets_[from][static_cast<std::size_t>(it - up.begin())];
}

SwarmState step_agents(const SwarmState& swarm, const TransitionSampler& sampler,
                       RngStream& rng) {
  std::vector<Bin> next(swarm.population());
  const auto& bins = swarm.agent_bins();
  for (std::size_t a = 0; a < bins.size(); ++a) {
    next[a] = sampler.sample(bins[a], rng.uniform());
  }
  return SwarmState(swarm.bin_count(), std::move(next));
}

SwarmState step_agents(const SwarmState& swarm, const StochasticMatrix& M,
                       RngStream& rng) {
  if (M.size() != swarm.bin_count()) throw DimensionMismatch("step_agents");
  return step_agents(swarm, TransitionSampler(M), rng);
}

DensityVector empirical_distribution(const SwarmState& swarm) {
  if (swarm.population() == 0) {
    throw SwarmError("empirical distribution of an empty swarm");
  }
  Eigen::VectorXd x(static_cast<Eigen::Index>(swarm.bin_count()));
  const double n = static_cast<double>(swarm.population());
  for (Bin b = 0; b < swarm.bin_count(); ++b) {
    x[static_cast<Eigen::Index>(b)] = static_cast<double>(swarm.count(b)) / n;
  }
  return DensityVector(std::move(x));
}

SwarmState spawn_uniform(std::size_t bin_count, const BinSet& region,
                         std::size_t N, RngStream& rng) {
  if (region.empty()) throw SwarmError("spawn region is empty");
  std::vector<Bin> bins(N);
  for (auto& b : bins) b = region[rng.below(region.size())];
  return SwarmState(bin_count, std::move(bins));
}

}  // namespace swarmengage
