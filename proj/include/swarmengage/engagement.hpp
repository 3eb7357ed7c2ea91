#pragma once

#include <optional>
#include <vector>

#include "swarmengage/swarm.hpp"

namespace swarmengage {

struct EliminationReport {
  std::vector<long> eliminated_per_bin;
  long blue_lost = 0;
  long red_lost = 0;

  bool any() const { return blue_lost > 0; }
};

struct EliminationResult {
  SwarmState blue;
  SwarmState red;
  EliminationReport report;
};

/// Co-located blue and red agents remove each other one for one. In every
/// bin the lowest-index agents of each color are the ones removed.
/// The rng is accepted for interface stability and is not consumed.
EliminationResult eliminate(const SwarmState& blue, const SwarmState& red,
                            RngStream& rng);

struct Reconfiguration {
  std::size_t population = 0;
  std::optional<DensityVector> distribution;  // empty when population is 0
};

Reconfiguration reconfigure(const SwarmState& swarm);

}  // namespace swarmengage
