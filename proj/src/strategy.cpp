#include "swarmengage/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swarmengage {

const char* to_string(PhaseOption option) {
  return option == PhaseOption::Freeze ? "freeze" : "replan";
}

PhaseOption parse_phase_option(const std::string& text) {
  if (text == "freeze") return PhaseOption::Freeze;
  if (text == "replan") return PhaseOption::Replan;
  throw ConfigError("option must be 'freeze' or 'replan', got '" + text + "'");
}

void StrategyConfig::validate() const {
  if (!(epsilon_opt > 0.0 && epsilon_opt < 1.0)) {
    throw ConfigError("epsilon_opt must lie in (0, 1)");
  }
  if (!(mass_tolerance > 0.0)) throw ConfigError("mass_tolerance must be positive");
}

ProjectionEstimate estimate_projection(const StochasticMatrix& M_r,
                                       const DensityVector& x_r,
                                       const BinSet& layer,
                                       const StrategyConfig& cfg,
                                       const BinSet& inside) {
  const std::size_t m = M_r.size();
  if (x_r.size() != m) throw DimensionMismatch("projection: sizes differ");
  if (layer.empty()) throw PreconditionViolated("projection onto an empty layer");
  const double eps = cfg.mass_tolerance;
  if (x_r.mass_on(inside) > eps) {
    throw PreconditionViolated("red already holds mass inside the layer");
  }
  auto absorbing = make_absorbing(M_r, layer);
  const auto on_layer = mask_of(layer, m);

  Eigen::VectorXd x = x_r.values();
  std::optional<std::size_t> t_fc;
  const std::size_t horizon = cfg.horizon(m);
  for (std::size_t n = 0; n <= horizon; ++n) {
    double absorbed = 0.0;
    for (Bin b : layer) absorbed += x[static_cast<Eigen::Index>(b)];
    double outside = 0.0;
    for (Bin b = 0; b < m; ++b) {
      if (!on_layer[b]) outside += x[static_cast<Eigen::Index>(b)];
    }
    if (!t_fc && absorbed > eps) t_fc = n;
    if (outside <= eps) {
      Eigen::VectorXd landed = Eigen::VectorXd::Zero(x.size());
      for (Bin b : layer) {
        landed[static_cast<Eigen::Index>(b)] = x[static_cast<Eigen::Index>(b)];
      }
      ProjectionEstimate est{DensityVector::normalized(std::move(landed)),
                             t_fc.value_or(n), n, 0};
      return est;
    }
    x = absorbing.entries() * x;
  }
  throw HorizonExceeded("red density did not settle on the layer within " +
                        std::to_string(horizon) + " steps");
}

double leakage_from(const DensityVector& x_rs_hat, const DensityVector& x_b_hat,
                    std::size_t N_b, std::size_t N_r) {
  if (x_rs_hat.size() != x_b_hat.size()) throw DimensionMismatch("leakage");
  Eigen::VectorXd gap = static_cast<double>(N_r) * x_rs_hat.values() -
                        static_cast<double>(N_b) * x_b_hat.values();
  return gap.cwiseMax(0.0).sum();
}

double estimate_leakage(const DensityVector& x_rs_hat, std::size_t t_fc,
                        const StochasticMatrix& M_b, const DensityVector& x_b,
                        std::size_t N_b, std::size_t N_r) {
  if (N_b == 0) return static_cast<double>(N_r);
  return leakage_from(x_rs_hat, propagate(M_b, x_b, t_fc), N_b, N_r);
}

double estimate_leakage_equal_pop(const DensityVector& x_rs_hat,
                                  const DensityVector& x_b_hat, std::size_t N) {
  return static_cast<double>(N) * tv_distance(x_rs_hat, x_b_hat);
}

std::size_t admissible_depth(const DensityVector& x_r, const BoundaryLayers& layers) {
  std::size_t depth = std::numeric_limits<std::size_t>::max();
  for (Bin b : x_r.support()) {
    int d = layers.distance[b];
    if (d < 0) continue;  // cannot reach the base at all
    depth = std::min(depth, static_cast<std::size_t>(d));
  }
  if (depth == std::numeric_limits<std::size_t>::max()) return 0;
  return std::min(depth, layers.count());
}

namespace {

EngagementPlan degenerate_plan(const DensityVector& x_r, std::size_t N_r,
                               std::size_t m, const std::string& why) {
  EngagementPlan plan;
  plan.projection = ProjectionEstimate{x_r, 0, 0, 1};
  plan.M_b = StochasticMatrix::identity(m);
  plan.x_b_hat = x_r;
  plan.L_r_hat = static_cast<double>(N_r);
  plan.red_population = N_r;
  plan.chosen = true;
  plan.degenerate = true;
  plan.warnings.push_back(why);
  return plan;
}

}  // namespace

EngagementPlan select_boundary(const StochasticMatrix& M_r, const DensityVector& x_r,
                               const std::optional<DensityVector>& x_b,
                               std::size_t N_b, std::size_t N_r,
                               const BoundaryLayers& layers,
                               const AdjacencyMatrix& adj, const StrategyConfig& cfg) {
  cfg.validate();
  const std::size_t m = adj.size();
  if (N_b == 0 || !x_b) {
    return degenerate_plan(x_r, N_r, m, "no blue agents to plan for");
  }
  const std::size_t depth = admissible_depth(x_r, layers);
  if (depth == 0) {
    return degenerate_plan(x_r, N_r, m, "red already occupies the first layer or base");
  }

  std::vector<std::string> warnings;
  // blue is expected to start strictly inside the admissible region
  double blue_outside = 0.0;
  for (Bin b = 0; b < m; ++b) {
    int d = layers.distance[b];
    if (d < 0 || static_cast<std::size_t>(d) >= depth) blue_outside += (*x_b)[b];
  }
  if (blue_outside > cfg.mass_tolerance) {
    warnings.push_back("blue starts at or beyond the layer red currently occupies");
  }

  std::optional<EngagementPlan> kept;
  for (std::size_t p = 1; p <= depth; ++p) {
    EngagementPlan candidate;
    try {
      candidate.projection =
          estimate_projection(M_r, x_r, layers.layer(p), cfg, layers.inside(p));
      candidate.projection.layer_index = p;
      candidate.M_b = synthesize_from(candidate.projection.x_rs_hat, adj, *x_b);
    } catch (const InfeasibleError& e) {
      if (p == 1) return degenerate_plan(x_r, N_r, m, e.what());
      break;
    }
    candidate.x_b_hat = propagate(candidate.M_b, *x_b, candidate.projection.t_fc);
    candidate.L_r_hat =
        leakage_from(candidate.projection.x_rs_hat, candidate.x_b_hat, N_b, N_r);
    candidate.red_population = N_r;
    if (candidate.ratio() < cfg.epsilon_opt || p == 1) {
      kept = std::move(candidate);
    } else {
      break;
    }
  }
  kept->chosen = true;
  kept->warnings = std::move(warnings);
  return std::move(*kept);
}

PhaseController::PhaseController(EngagementPlan plan, StrategyConfig cfg,
                                 StochasticMatrix M_r, AdjacencyMatrix adj,
                                 BoundaryLayers layers)
    : plan_(std::move(plan)),
      cfg_(cfg),
      M_r_(std::move(M_r)),
      adj_(std::move(adj)),
      layers_(std::move(layers)),
      current_(plan_.M_b),
      sampler_(current_),
      target_(plan_.projection.x_rs_hat) {
  const std::size_t p = plan_.projection.layer_index;
  if (p >= 1 && p <= layers_.count()) {
    layer_ = layers_.layer(p);
    inside_ = layers_.inside(p);
  } else {
    inside_ = layers_.base;
  }
  reach_mask_ = mask_of(layer_, adj_.size());
  for (Bin b : inside_) reach_mask_[b] = 1;
}

void PhaseController::set_chain(StochasticMatrix M) {
  current_ = std::move(M);
  sampler_ = TransitionSampler(current_);
}

void PhaseController::observe(std::size_t step, const StepObservation& obs) {
  if (!contact_) {
    for (Bin b : obs.red_moved.agent_bins()) {
      if (reach_mask_[b]) {
        contact_ = true;
        contact_step_ = step;
        break;
      }
    }
  }
  if (cfg_.option == PhaseOption::Freeze) {
    if (contact_ && !frozen_) {
      frozen_ = true;
      set_chain(StochasticMatrix::identity(adj_.size()));
    }
    return;
  }
  if (obs.report.any()) replan(obs.red, obs.blue);
}

void PhaseController::replan(const SwarmState& red, const SwarmState& blue) {
  const std::size_t m = adj_.size();
  auto hold = [&] {
    if (!current_.is_identity()) set_chain(StochasticMatrix::identity(m));
  };
  if (blue.population() == 0 || layer_.empty()) return hold();
  // red that already slipped past the layer is out of reach for this layer
  auto inside_mask = mask_of(inside_, m);
  Eigen::VectorXd remaining = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (Bin b = 0; b < m; ++b) {
    if (!inside_mask[b]) remaining[static_cast<Eigen::Index>(b)] = static_cast<double>(red.count(b));
  }
  if (remaining.sum() <= 0.0) return hold();
  try {
    auto proj = estimate_projection(M_r_, DensityVector::normalized(remaining), layer_,
                                    cfg_, inside_);
    auto M_b = synthesize_from(proj.x_rs_hat, adj_, empirical_distribution(blue));
    target_ = proj.x_rs_hat;
    set_chain(std::move(M_b));
    ++resyntheses_;
  } catch (const InfeasibleError&) {
    hold();
  }
}

}  // namespace swarmengage
