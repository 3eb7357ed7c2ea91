#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swarmengage/engagement.hpp"
#include "swarmengage/gridworld.hpp"
#include "swarmengage/markov.hpp"
#include "swarmengage/swarm.hpp"

namespace swarmengage {

/// What the blue swarm does once red has reached the chosen layer.
enum class PhaseOption {
  Freeze,  ///< hold position (identity chain)
  Replan,  ///< re-project red and re-synthesize after every elimination
};

const char* to_string(PhaseOption option);
PhaseOption parse_phase_option(const std::string& text);

struct StrategyConfig {
  double epsilon_opt = 0.1;
  PhaseOption option = PhaseOption::Freeze;
  double mass_tolerance = 1e-9;
  std::size_t horizon_cap = 0;  ///< 0 means 50 * bin count

  void validate() const;
  std::size_t horizon(std::size_t bin_count) const {
    return horizon_cap ? horizon_cap : 50 * bin_count;
  }
};

/// Where red's density lands when the layer bins are made absorbing.
struct ProjectionEstimate {
  DensityVector x_rs_hat;
  std::size_t t_fc = 0;  ///< first step with red mass on the layer
  std::size_t t_lc = 0;  ///< first step with (almost) all red mass on the layer
  std::size_t layer_index = 0;
};

struct EngagementPlan {
  ProjectionEstimate projection;
  StochasticMatrix M_b;
  DensityVector x_b_hat;  ///< blue density predicted at t_fc
  double L_r_hat = 0.0;
  std::size_t red_population = 0;
  bool chosen = false;
  /// Set when no layer could be planned and blue simply holds position.
  bool degenerate = false;
  std::vector<std::string> warnings;

  double ratio() const {
    return red_population ? L_r_hat / static_cast<double>(red_population) : 0.0;
  }
};

/// Propagates x_r under M_r with `layer` absorbing until the mass off the
/// layer drops to cfg.mass_tolerance. `inside` lists bins red must not
/// occupy yet (the base and every closer layer); mass already on the layer
/// itself is allowed and is absorbed at t = 0.
/// Throws PreconditionViolated or HorizonExceeded.
ProjectionEstimate estimate_projection(const StochasticMatrix& M_r,
                                       const DensityVector& x_r,
                                       const BinSet& layer,
                                       const StrategyConfig& cfg,
                                       const BinSet& inside = {});

/// 1ᵀ max(N_r x_rs_hat - N_b x_b_hat, 0).
double leakage_from(const DensityVector& x_rs_hat, const DensityVector& x_b_hat,
                    std::size_t N_b, std::size_t N_r);

/// Leakage with x_b_hat = M_b^t_fc x_b.
double estimate_leakage(const DensityVector& x_rs_hat, std::size_t t_fc,
                        const StochasticMatrix& M_b, const DensityVector& x_b,
                        std::size_t N_b, std::size_t N_r);

/// Equal-population shortcut: N times the total variation distance.
double estimate_leakage_equal_pop(const DensityVector& x_rs_hat,
                                  const DensityVector& x_b_hat, std::size_t N);

/// Largest layer index red leaves free (red occupies only that layer and
/// farther). 0 when red already touches layer 1 or the base.
std::size_t admissible_depth(const DensityVector& x_r, const BoundaryLayers& layers);

/// Walks layers outward from the base and keeps the farthest one whose
/// leakage ratio stays under cfg.epsilon_opt (layer 1 is always kept).
/// x_b may be empty when N_b is 0.
EngagementPlan select_boundary(const StochasticMatrix& M_r, const DensityVector& x_r,
                               const std::optional<DensityVector>& x_b,
                               std::size_t N_b, std::size_t N_r,
                               const BoundaryLayers& layers,
                               const AdjacencyMatrix& adj, const StrategyConfig& cfg);

/// What happened in one simulation step, as seen by the blue planner.
struct StepObservation {
  const SwarmState& red_moved;  ///< red after moving, before elimination
  const EliminationReport& report;
  const SwarmState& red;   ///< after elimination
  const SwarmState& blue;  ///< after elimination
};

/// Chooses blue's chain step by step. Phase 1 runs the planned chain until
/// red first touches the layer; phase 2 applies the configured option.
class PhaseController {
 public:
  PhaseController(EngagementPlan plan, StrategyConfig cfg, StochasticMatrix M_r,
                  AdjacencyMatrix adj, BoundaryLayers layers);

  /// Chain for blue's next move.
  const StochasticMatrix& current() const { return current_; }
  const TransitionSampler& sampler() const { return sampler_; }
  /// Blue's current desired distribution.
  const DensityVector& target() const { return target_; }
  const EngagementPlan& plan() const { return plan_; }

  int phase() const { return contact_ ? 2 : 1; }
  std::size_t resyntheses() const { return resyntheses_; }
  std::optional<std::size_t> contact_step() const { return contact_step_; }

  void observe(std::size_t step, const StepObservation& obs);

 private:
  void set_chain(StochasticMatrix M);
  void replan(const SwarmState& red, const SwarmState& blue);

  EngagementPlan plan_;
  StrategyConfig cfg_;
  StochasticMatrix M_r_;
  AdjacencyMatrix adj_;
  BoundaryLayers layers_;
  BinSet layer_;
  BinSet inside_;
  std::vector<char> reach_mask_;  // layer plus inside
  StochasticMatrix current_;
  TransitionSampler sampler_;
  DensityVector target_;
  bool contact_ = false;
  bool frozen_ = false;
  std::optional<std::size_t> contact_step_;
  std::size_t resyntheses_ = 0;
};

}  // namespace swarmengage
