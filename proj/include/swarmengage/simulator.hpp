#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swarmengage/strategy.hpp"

namespace swarmengage {

struct RedSetup {
  std::size_t count = 0;
  BinSet init_region;
  /// Target density over the base; uniform over base bins when empty.
  std::vector<double> base_weights;
};

struct BlueSetup {
  std::size_t count = 0;
  BinSet init_region;
};

struct ScenarioConfig {
  GridSpec grid;
  RedSetup red;
  BlueSetup blue;
  StrategyConfig strategy;
  std::size_t max_steps = 0;  ///< 0 means 50 * bin count
  std::uint64_t seed = 0;

  std::size_t step_limit() const {
    return max_steps ? max_steps : 50 * grid.bin_count();
  }
};

/// Everything derived from the config that does not depend on the seed.
struct PreparedScenario {
  AdjacencyMatrix adj;
  BoundaryLayers layers;
  DensityVector v_b;
  StochasticMatrix M_r;
};

/// Validates the config and synthesizes red's chain. Throws ConfigError for
/// malformed scenarios and InfeasibleError when synthesis fails.
PreparedScenario prepare(const ScenarioConfig& config);

enum class Termination { NoRed, RedAnnihilated, RedInBase, MaxSteps };
const char* to_string(Termination t);

struct StepRecord {
  std::size_t step = 0;
  std::vector<long> s_b;
  std::vector<long> s_r;
  std::vector<long> eliminated;
  long entered_cum = 0;
  std::optional<double> blue_tv;  ///< empty once blue is gone
  int phase = 1;
  std::size_t N_b = 0;
  std::size_t N_r = 0;
};

struct RunSummary {
  std::uint64_t seed = 0;
  PhaseOption option = PhaseOption::Freeze;
  double epsilon_opt = 0.0;
  std::size_t chosen_layer = 0;
  std::size_t t_fc = 0;
  std::size_t t_lc = 0;
  double L_r_hat = 0.0;
  double estimated_ratio = 0.0;
  bool degenerate_plan = false;
  std::vector<std::string> plan_warnings;
  std::size_t initial_N_b = 0;
  std::size_t initial_N_r = 0;
  std::size_t final_N_b = 0;
  std::size_t final_N_r = 0;
  std::size_t entered = 0;
  std::size_t steps = 0;
  std::optional<std::size_t> contact_step;
  std::optional<std::size_t> first_elimination_step;
  std::size_t resyntheses = 0;
  Termination termination = Termination::MaxSteps;
};

struct RunResult {
  RunSummary summary;
  std::vector<StepRecord> records;
};

struct PlanResult {
  PreparedScenario scenario;
  EngagementPlan plan;
  std::size_t N_b = 0;
  std::size_t N_r = 0;
};

/// Spawns both swarms for `config.seed` and plans, without simulating.
PlanResult plan_only(const ScenarioConfig& config);

RunResult run(const ScenarioConfig& config);
RunResult run(const ScenarioConfig& config, const PreparedScenario& scenario);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation; 0 for a single run
};

struct EnsembleStats {
  std::size_t runs = 0;
  MeanStd entered;
  MeanStd blue_lost;
  MeanStd red_lost;
  MeanStd L_r_hat;
  std::vector<RunSummary> summaries;
  /// Mean blue TV to target per step, over runs still holding blue agents.
  std::vector<double> mean_blue_tv;
};

/// Runs seeds seed, seed+1, ..., seed+n_runs-1. `threads` > 1 runs them
/// concurrently; results do not depend on the thread count.
EnsembleStats run_ensemble(const ScenarioConfig& config, std::size_t n_runs,
                           std::size_t threads = 1,
                           const std::function<void(std::size_t, const RunResult&)>& each = {});

MeanStd mean_std(const std::vector<double>& xs);

}  // namespace swarmengage
