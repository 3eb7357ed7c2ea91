#include "swarmengage/simulator.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace swarmengage {

namespace {

constexpr std::uint64_t kRedSpawnStream = 0;
constexpr std::uint64_t kBlueSpawnStream = 1;
constexpr std::uint64_t kRedMoveStream = 2;
constexpr std::uint64_t kBlueMoveStream = 3;
constexpr std::uint64_t kEliminationStream = 4;

void check_region(const GridSpec& grid, const BinSet& region, const char* what) {
  for (Bin b : region) {
    if (b >= grid.bin_count()) throw ConfigError(std::string(what) + " bin out of range");
    if (grid.is_obstacle(b)) {
      throw ConfigError(std::string(what) + " includes obstacle bin " + std::to_string(b));
    }
  }
}

StepRecord record(std::size_t step, const SwarmState& blue, const SwarmState& red,
                  std::vector<long> eliminated, long entered,
                  const PhaseController& ctl) {
  StepRecord r;
  r.step = step;
  r.s_b = blue.counts();
  r.s_r = red.counts();
  r.eliminated = std::move(eliminated);
  r.entered_cum = entered;
  if (blue.population() > 0) {
    r.blue_tv = tv_distance(empirical_distribution(blue), ctl.target());
  }
  r.phase = ctl.phase();
  r.N_b = blue.population();
  r.N_r = red.population();
  return r;
}

bool all_in_base(const SwarmState& red, const GridSpec& grid) {
  for (Bin b : red.agent_bins()) {
    if (!grid.is_base(b)) return false;
  }
  return true;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::NoRed:
      return "no_red";
    case Termination::RedAnnihilated:
      return "red_annihilated";
    case Termination::RedInBase:
      return "red_in_base";
    case Termination::MaxSteps:
      return "max_steps";
  }
  return "unknown";
}

PreparedScenario prepare(const ScenarioConfig& config) {
  const auto& grid = config.grid;
  config.strategy.validate();
  check_region(grid, config.red.init_region, "red init");
  check_region(grid, config.blue.init_region, "blue init");
  if (config.red.count > 0 && config.red.init_region.empty()) {
    throw ConfigError("red init region is empty");
  }
  if (config.blue.count > 0 && config.blue.init_region.empty()) {
    throw ConfigError("blue init region is empty");
  }
  PreparedScenario out;
  out.adj = build_grid_adjacency(grid);
  if (!is_strongly_connected(out.adj, grid.free_bins())) {
    throw InfeasibleError("free bins of the grid are not strongly connected");
  }
  out.layers = compute_boundary_layers(out.adj, grid.base_bins());

  const std::size_t m = grid.bin_count();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  const auto& base = grid.base_bins();
  if (config.red.base_weights.empty()) {
    for (Bin b : base) v[static_cast<Eigen::Index>(b)] = 1.0;
  } else {
    if (config.red.base_weights.size() != base.size()) {
      throw ConfigError("v_b must give one weight per base bin");
    }
    for (std::size_t k = 0; k < base.size(); ++k) {
      if (!(config.red.base_weights[k] > 0.0)) {
        throw ConfigError("v_b weights must be positive");
      }
      v[static_cast<Eigen::Index>(base[k])] = config.red.base_weights[k];
    }
  }
  out.v_b = DensityVector::normalized(std::move(v));
  out.M_r = synthesize(out.v_b, out.adj);
  return out;
}

namespace {

struct Spawned {
  SwarmState red;
  SwarmState blue;
};

Spawned spawn(const ScenarioConfig& config) {
  const std::size_t m = config.grid.bin_count();
  RngStream red_rng(config.seed, kRedSpawnStream);
  RngStream blue_rng(config.seed, kBlueSpawnStream);
  SwarmState red = config.red.count
                       ? spawn_uniform(m, config.red.init_region, config.red.count, red_rng)
                       : SwarmState(m, {});
  SwarmState blue = config.blue.count
                        ? spawn_uniform(m, config.blue.init_region, config.blue.count, blue_rng)
                        : SwarmState(m, {});
  return {std::move(red), std::move(blue)};
}

EngagementPlan make_plan(const ScenarioConfig& config, const PreparedScenario& sc,
                         const SwarmState& red, const SwarmState& blue) {
  std::optional<DensityVector> x_b;
  if (blue.population() > 0) x_b = empirical_distribution(blue);
  return select_boundary(sc.M_r, empirical_distribution(red), x_b, blue.population(),
                         red.population(), sc.layers, sc.adj, config.strategy);
}

}  // namespace

PlanResult plan_only(const ScenarioConfig& config) {
  PlanResult out;
  out.scenario = prepare(config);
  auto swarms = spawn(config);
  out.N_b = swarms.blue.population();
  out.N_r = swarms.red.population();
  if (out.N_r == 0) throw InfeasibleError("no red agents to plan against");
  out.plan = make_plan(config, out.scenario, swarms.red, swarms.blue);
  return out;
}

RunResult run(const ScenarioConfig& config) { return run(config, prepare(config)); }

RunResult run(const ScenarioConfig& config, const PreparedScenario& sc) {
  const auto& grid = config.grid;
  const std::size_t m = grid.bin_count();
  auto [red, blue] = spawn(config);

  RunResult result;
  auto& sum = result.summary;
  sum.seed = config.seed;
  sum.option = config.strategy.option;
  sum.epsilon_opt = config.strategy.epsilon_opt;
  sum.initial_N_b = blue.population();
  sum.initial_N_r = red.population();

  long entered = 0;
  for (Bin b : red.agent_bins()) entered += grid.is_base(b) ? 1 : 0;

  if (red.population() == 0) {
    sum.termination = Termination::NoRed;
    StepRecord r;
    r.s_b = blue.counts();
    r.s_r = red.counts();
    r.eliminated.assign(m, 0);
    r.N_b = blue.population();
    result.records.push_back(std::move(r));
    sum.final_N_b = blue.population();
    return result;
  }

  EngagementPlan plan = make_plan(config, sc, red, blue);
  sum.chosen_layer = plan.projection.layer_index;
  sum.t_fc = plan.projection.t_fc;
  sum.t_lc = plan.projection.t_lc;
  sum.L_r_hat = plan.L_r_hat;
  sum.estimated_ratio = plan.ratio();
  sum.degenerate_plan = plan.degenerate;
  sum.plan_warnings = plan.warnings;

  PhaseController ctl(std::move(plan), config.strategy, sc.M_r, sc.adj, sc.layers);
  TransitionSampler red_sampler(sc.M_r);
  RngStream red_rng(config.seed, kRedMoveStream);
  RngStream blue_rng(config.seed, kBlueMoveStream);
  RngStream elim_rng(config.seed, kEliminationStream);

  result.records.push_back(record(0, blue, red, std::vector<long>(m, 0), entered, ctl));

  std::optional<Termination> done;
  if (all_in_base(red, grid)) done = Termination::RedInBase;

  std::size_t step = 0;
  const std::size_t limit = config.step_limit();
  while (!done && step < limit) {
    ++step;
    SwarmState red_moved = step_agents(red, red_sampler, red_rng);
    SwarmState blue_moved = step_agents(blue, ctl.sampler(), blue_rng);
    const auto& before = red.agent_bins();
    const auto& after = red_moved.agent_bins();
    for (std::size_t a = 0; a < after.size(); ++a) {
      if (grid.is_base(after[a]) && !grid.is_base(before[a])) ++entered;
    }
    auto out = eliminate(blue_moved, red_moved, elim_rng);
    if (out.report.any() && !sum.first_elimination_step) {
      sum.first_elimination_step = step;
    }
    ctl.observe(step, StepObservation{red_moved, out.report, out.red, out.blue});
    red = std::move(out.red);
    blue = std::move(out.blue);
    result.records.push_back(
        record(step, blue, red, std::move(out.report.eliminated_per_bin), entered, ctl));
    if (red.population() == 0) {
      done = Termination::RedAnnihilated;
    } else if (all_in_base(red, grid)) {
      done = Termination::RedInBase;
    }
  }

  sum.termination = done.value_or(Termination::MaxSteps);
  sum.steps = step;
  sum.final_N_b = blue.population();
  sum.final_N_r = red.population();
  sum.entered = static_cast<std::size_t>(entered);
  sum.contact_step = ctl.contact_step();
  sum.resyntheses = ctl.resyntheses();
  return result;
}

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  double s = 0.0;
  for (double x : xs) s += x;
  out.mean = s / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

EnsembleStats run_ensemble(const ScenarioConfig& config, std::size_t n_runs,
                           std::size_t threads,
                           const std::function<void(std::size_t, const RunResult&)>& each) {
  if (n_runs == 0) throw ConfigError("ensemble needs at least one run");
  const PreparedScenario sc = prepare(config);
  std::vector<RunSummary> summaries(n_runs);
  std::vector<std::vector<std::optional<double>>> tv(n_runs);
  std::atomic<std::size_t> next{0};
  std::mutex callback_lock;
  auto worker = [&] {
    for (std::size_t k = next++; k < n_runs; k = next++) {
      ScenarioConfig cfg = config;
      cfg.seed = config.seed + k;
      RunResult r = run(cfg, sc);
      summaries[k] = r.summary;
      for (const auto& rec : r.records) tv[k].push_back(rec.blue_tv);
      if (each) {
        std::lock_guard lock(callback_lock);
        each(k, r);
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, n_runs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  EnsembleStats stats;
  stats.runs = n_runs;
  std::vector<double> entered, blue_lost, red_lost, L;
  for (const auto& s : summaries) {
    entered.push_back(static_cast<double>(s.entered));
    blue_lost.push_back(static_cast<double>(s.initial_N_b - s.final_N_b));
    red_lost.push_back(static_cast<double>(s.initial_N_r - s.final_N_r));
    L.push_back(s.L_r_hat);
  }
  stats.entered = mean_std(entered);
  stats.blue_lost = mean_std(blue_lost);
  stats.red_lost = mean_std(red_lost);
  stats.L_r_hat = mean_std(L);
  std::size_t longest = 0;
  for (const auto& t : tv) longest = std::max(longest, t.size());
  for (std::size_t k = 0; k < longest; ++k) {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& t : tv) {
      if (k < t.size() && t[k]) {
        s += *t[k];
        ++n;
      }
    }
    stats.mean_blue_tv.push_back(n ? s / static_cast<double>(n) : 0.0);
  }
  stats.summaries = std::move(summaries);
  return stats;
}

}  // namespace swarmengage
