#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "swarmengage/strategy.hpp"

using namespace swarmengage;
using Eigen::VectorXd;

namespace {

AdjacencyMatrix chain(std::size_t n) { return build_grid_adjacency(GridSpec({1, n}, {}, {0})); }

// Red walks toward bin 0 on a chain of n bins.
struct ChainWorld {
  std::size_t n;
  AdjacencyMatrix adj;
  BoundaryLayers layers;
  StochasticMatrix M_r;

  explicit ChainWorld(std::size_t n_)
      : n(n_),
        adj(chain(n_)),
        layers(compute_boundary_layers(adj, {0})),
        M_r(synthesize(DensityVector::point(n_, 0), adj)) {}
};

}  // namespace

TEST_CASE("strategy config validation") {
  StrategyConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.epsilon_opt = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.epsilon_opt = 0.5;
  cfg.mass_tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(parse_phase_option("replan") == PhaseOption::Replan);
  CHECK_THROWS_AS(parse_phase_option("hold"), ConfigError);
  CHECK(StrategyConfig{}.horizon(64) == 3200);
}

TEST_CASE("projection on a deterministic chain") {
  // bins 0..3 with base 3: red shifts right
  auto adj = chain(4);
  auto M = synthesize(DensityVector::point(4, 3), adj);
  StrategyConfig cfg;
  auto est = estimate_projection(M, DensityVector::point(4, 0), {2}, cfg, {3});
  CHECK(est.t_fc == 2);
  CHECK(est.t_lc == 2);
  CHECK(est.x_rs_hat[2] == 1.0);

  auto near = estimate_projection(M, DensityVector::point(4, 1), {2}, cfg, {3});
  CHECK(near.t_fc == 1);
  CHECK(near.t_lc == 1);

  // already on the layer
  auto on = estimate_projection(M, DensityVector::point(4, 2), {2}, cfg, {3});
  CHECK(on.t_fc == 0);
  CHECK(on.t_lc == 0);

  CHECK_THROWS_AS(estimate_projection(M, DensityVector::point(4, 3), {2}, cfg, {3}),
                  PreconditionViolated);
}

TEST_CASE("projection fails when red never reaches the layer") {
  auto adj = chain(4);
  auto M = StochasticMatrix::identity(4);
  StrategyConfig cfg;
  cfg.horizon_cap = 30;
  CHECK_THROWS_AS(estimate_projection(M, DensityVector::point(4, 0), {2}, cfg, {3}),
                  HorizonExceeded);
}

TEST_CASE("projection on a branching map matches the fundamental matrix") {
  // 3x4 map, random lazy walk, traps on column 2
  std::mt19937_64 gen(5);
  auto adj = build_grid_adjacency(GridSpec({3, 4}, {}, {0}));
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(12, 12);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (Bin j = 0; j < 12; ++j) {
    W(j, j) = u(gen);
    for (Bin i : adj.successors(j)) W(i, j) = u(gen);
  }
  for (Eigen::Index j = 0; j < 12; ++j) W.col(j) /= W.col(j).sum();
  StochasticMatrix M(W);
  BinSet layer{2, 6, 10};
  VectorXd x0 = VectorXd::Zero(12);
  x0[0] = 0.5;
  x0[5] = 0.3;
  x0[9] = 0.2;
  auto x = DensityVector(x0);
  StrategyConfig cfg;
  cfg.mass_tolerance = 1e-13;
  cfg.horizon_cap = 100000;
  auto est = estimate_projection(M, x, layer, cfg, {});
  auto ref = oracle::absorption(W, x0, {2, 6, 10}, {0, 1, 3, 4, 5, 7, 8, 9, 11});
  for (int i = 0; i < 12; ++i) CHECK(std::abs(est.x_rs_hat[i] - ref[i]) < 1e-9);
  CHECK(est.x_rs_hat.mass_on(layer) == doctest::Approx(1.0));
  CHECK(est.t_fc == 1);
  CHECK(est.t_lc >= est.t_fc);
}

TEST_CASE("leakage estimates") {
  auto a = DensityVector::uniform_on(4, {0, 1});
  CHECK(estimate_leakage(a, 3, StochasticMatrix::identity(4), a, 100, 100) == 0.0);
  CHECK(estimate_leakage(a, 3, StochasticMatrix::identity(4), a, 0, 100) == 100.0);

  VectorXd r(2), b(2);
  r << 1.0, 0.0;
  b << 0.922, 0.078;
  DensityVector xr(r), xb(b);
  CHECK(std::abs(estimate_leakage_equal_pop(xr, xb, 1000) - 78.0) < 1e-9 * 1000);
  CHECK(std::lround(estimate_leakage_equal_pop(xr, xb, 1000)) == 78);

  b << 0.934, 0.066;
  DensityVector xb3(b);
  CHECK(std::abs(estimate_leakage_equal_pop(xr, xb3, 200) - 13.2) < 1e-9 * 200);
  CHECK(std::lround(estimate_leakage_equal_pop(xr, xb3, 200)) == 13);
  CHECK(estimate_leakage_equal_pop(xr, xr, 200) == 0.0);
}

TEST_CASE("equal-population shortcut agrees with the elementwise formula") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    VectorXd p(5), q(5);
    for (int i = 0; i < 5; ++i) {
      p[i] = u(gen);
      q[i] = u(gen);
    }
    auto x = DensityVector::normalized(p), y = DensityVector::normalized(q);
    std::size_t N = 1 + gen() % 5000;
    std::vector<double> sr(5), sb(5);
    for (int i = 0; i < 5; ++i) {
      sr[i] = N * x[i];
      sb[i] = N * y[i];
    }
    double brute = oracle::positive_gap(sr, sb);
    CHECK(std::abs(estimate_leakage_equal_pop(x, y, N) - brute) <= 1e-9 * N);
    CHECK(std::abs(leakage_from(x, y, N, N) - brute) <= 1e-9 * N);
  }
}

TEST_CASE("admissible depth") {
  ChainWorld w(8);
  CHECK(admissible_depth(DensityVector::point(8, 7), w.layers) == 7);
  CHECK(admissible_depth(DensityVector::uniform_on(8, {4, 6}), w.layers) == 4);
  CHECK(admissible_depth(DensityVector::point(8, 1), w.layers) == 1);
  CHECK(admissible_depth(DensityVector::point(8, 0), w.layers) == 0);
}

TEST_CASE("boundary selection on a chain meets red halfway") {
  // red 9 moves from the base; blue needs p moves to reach layer p and red
  // reaches it after 9 - p, so layer 4 is the farthest one blue holds in time
  ChainWorld w(10);
  StrategyConfig cfg;
  auto plan = select_boundary(w.M_r, DensityVector::point(10, 9), DensityVector::point(10, 0),
                              50, 50, w.layers, w.adj, cfg);
  CHECK(plan.chosen);
  CHECK_FALSE(plan.degenerate);
  CHECK(plan.projection.layer_index == 4);
  CHECK(plan.projection.t_fc == 5);
  CHECK(plan.L_r_hat == doctest::Approx(0.0));
  CHECK(plan.ratio() < cfg.epsilon_opt);
  CHECK(plan.M_b.respects(w.adj));
  CHECK(plan.warnings.empty());

  // planning is deterministic
  auto again = select_boundary(w.M_r, DensityVector::point(10, 9), DensityVector::point(10, 0),
                               50, 50, w.layers, w.adj, cfg);
  CHECK(again.M_b.entries() == plan.M_b.entries());
  CHECK(again.L_r_hat == plan.L_r_hat);
}

TEST_CASE("boundary selection keeps layer one even when it leaks") {
  // red already sits on layer 1, blue can never get there in time
  ChainWorld w(6);
  StrategyConfig cfg;
  cfg.epsilon_opt = 1.0 - 1e-9;
  auto plan = select_boundary(w.M_r, DensityVector::point(6, 1), DensityVector::point(6, 0),
                              10, 10, w.layers, w.adj, cfg);
  CHECK(plan.projection.layer_index == 1);
  CHECK(plan.L_r_hat == doctest::Approx(10.0));
  CHECK_FALSE(plan.degenerate);
}

TEST_CASE("degenerate plans") {
  ChainWorld w(6);
  StrategyConfig cfg;
  auto none = select_boundary(w.M_r, DensityVector::point(6, 5), std::nullopt, 0, 30,
                              w.layers, w.adj, cfg);
  CHECK(none.degenerate);
  CHECK(none.L_r_hat == 30.0);
  CHECK(none.M_b.is_identity());

  auto touching = select_boundary(w.M_r, DensityVector::point(6, 0),
                                  DensityVector::point(6, 0), 5, 5, w.layers, w.adj, cfg);
  CHECK(touching.degenerate);
  CHECK(touching.L_r_hat == 5.0);
}

TEST_CASE("boundary selection warns when blue starts outside") {
  ChainWorld w(10);
  auto plan = select_boundary(w.M_r, DensityVector::point(10, 5), DensityVector::point(10, 7),
                              5, 5, w.layers, w.adj, StrategyConfig{});
  CHECK_FALSE(plan.warnings.empty());
}

namespace {

struct ControllerFixture {
  ChainWorld w{10};
  StrategyConfig cfg;
  EngagementPlan plan;

  explicit ControllerFixture(PhaseOption opt) {
    cfg.option = opt;
    plan = select_boundary(w.M_r, DensityVector::point(10, 9), DensityVector::point(10, 0), 3,
                           3, w.layers, w.adj, cfg);
  }
  PhaseController make() { return PhaseController(plan, cfg, w.M_r, w.adj, w.layers); }
};

EliminationReport no_losses(std::size_t m) { return {std::vector<long>(m, 0), 0, 0}; }

}  // namespace

TEST_CASE("controller keeps the planned chain before contact") {
  ControllerFixture f(PhaseOption::Freeze);
  auto ctl = f.make();
  SwarmState red(10, {9, 9, 8});
  SwarmState blue(10, {1, 1, 2});
  auto rep = no_losses(10);
  for (std::size_t k = 1; k <= 3; ++k) {
    ctl.observe(k, StepObservation{red, rep, red, blue});
    CHECK(ctl.phase() == 1);
    CHECK(ctl.current().entries() == f.plan.M_b.entries());
  }
  CHECK_FALSE(ctl.contact_step());
}

TEST_CASE("freeze switches to identity on contact") {
  ControllerFixture f(PhaseOption::Freeze);
  auto ctl = f.make();
  SwarmState far(10, {9, 8});
  SwarmState blue(10, {3, 4});
  auto rep = no_losses(10);
  ctl.observe(6, StepObservation{far, rep, far, blue});
  CHECK(ctl.phase() == 1);
  SwarmState touching(10, {4, 8});
  ctl.observe(7, StepObservation{touching, rep, touching, blue});
  CHECK(ctl.phase() == 2);
  CHECK(ctl.contact_step() == 7u);
  CHECK(ctl.current().is_identity());
  ctl.observe(8, StepObservation{far, rep, far, blue});
  CHECK(ctl.current().is_identity());
  CHECK(ctl.resyntheses() == 0);
}

TEST_CASE("replan re-synthesizes once per elimination event") {
  ControllerFixture f(PhaseOption::Replan);
  auto ctl = f.make();
  SwarmState red_moved(10, {4, 6, 7});
  SwarmState red_after(10, {6, 7});
  SwarmState blue(10, {3, 4});
  EliminationReport hit{std::vector<long>(10, 0), 1, 1};
  hit.eliminated_per_bin[4] = 1;
  SwarmState blue_after(10, {3});
  ctl.observe(5, StepObservation{red_moved, hit, red_after, blue_after});
  CHECK(ctl.resyntheses() == 1);
  CHECK(ctl.phase() == 2);
  // new target is the projection of the survivors onto the layer
  CHECK(ctl.target()[4] == doctest::Approx(1.0));
  auto rep = no_losses(10);
  ctl.observe(6, StepObservation{red_after, rep, red_after, blue_after});
  CHECK(ctl.resyntheses() == 1);
  CHECK_FALSE(ctl.current().is_identity());
}

TEST_CASE("replan holds position once red is past the layer") {
  ControllerFixture f(PhaseOption::Replan);
  auto ctl = f.make();
  SwarmState red(10, {2});
  SwarmState blue(10, {3});
  EliminationReport hit{std::vector<long>(10, 0), 1, 1};
  ctl.observe(5, StepObservation{red, hit, red, blue});
  CHECK(ctl.current().is_identity());
  CHECK(ctl.resyntheses() == 0);
}
