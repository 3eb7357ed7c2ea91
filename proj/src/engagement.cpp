#include "swarmengage/engagement.hpp"

#include <algorithm>

namespace swarmengage {

namespace {

// Drops the first `kill[b]` agents (by list order) found in each bin b.
std::vector<Bin> survivors(const SwarmState& swarm, std::vector<long> kill) {
  std::vector<Bin> out;
  out.reserve(swarm.population());
  for (Bin b : swarm.agent_bins()) {
    if (kill[b] > 0) {
      --kill[b];
      continue;
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace

EliminationResult eliminate(const SwarmState& blue, const SwarmState& red,
                            RngStream& /*rng*/) {
  if (blue.bin_count() != red.bin_count()) {
    throw DimensionMismatch("eliminate: swarms live on different grids");
  }
  const std::size_t m = blue.bin_count();
  EliminationReport report;
  report.eliminated_per_bin.assign(m, 0);
  for (Bin b = 0; b < m; ++b) {
    long k = std::min(blue.count(b), red.count(b));
    report.eliminated_per_bin[b] = k;
    report.blue_lost += k;
  }
  report.red_lost = report.blue_lost;
  if (!report.any()) return {blue, red, std::move(report)};
  const auto& kill = report.eliminated_per_bin;
  return {SwarmState(m, survivors(blue, kill)), SwarmState(m, survivors(red, kill)),
          std::move(report)};
}

Reconfiguration reconfigure(const SwarmState& swarm) {
  Reconfiguration out;
  out.population = swarm.population();
  if (out.population > 0) out.distribution = empirical_distribution(swarm);
  return out;
}

}  // namespace swarmengage
