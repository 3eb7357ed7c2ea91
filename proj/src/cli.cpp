#include "swarmengage/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "swarmengage/output.hpp"
#include "swarmengage/scenario.hpp"

namespace swarmengage {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string option;
  std::string out_dir;
  bool heatmaps = false;
  std::size_t runs = 1;
  std::size_t threads = 1;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "scenario file")->required();
  sub->add_option("--seed", o.seed, "override the scenario seed");
  sub->add_option("--option", o.option, "phase-2 policy")
      ->check(CLI::IsMember({"freeze", "replan"}));
  sub->add_option("--out", o.out_dir, "output directory");
}

json load_resolved(const Options& o) {
  ScenarioOverrides ov;
  ov.seed = o.seed;
  if (!o.option.empty()) ov.option = parse_phase_option(o.option);
  return resolve_scenario(apply_overrides(load_scenario_file(o.config), ov));
}

std::string seconds_since(std::chrono::steady_clock::time_point t0) {
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", dt);
  return buf;
}

void write_run_files(const fs::path& dir, const ScenarioConfig& cfg, const RunResult& r,
                     bool heatmaps) {
  fs::create_directories(dir);
  write_json_file(dir / "summary.json", summary_json(r.summary));
  {
    std::ofstream f(dir / "run.csv");
    write_bin_csv(f, r.records);
  }
  {
    std::ofstream f(dir / "timeline.csv");
    write_timeline_csv(f, r.records);
  }
  if (heatmaps) write_heatmaps(dir / "heatmaps", cfg.grid, r.records);
}

int cmd_validate(const Options& o, std::ostream& out) {
  json doc = load_resolved(o);
  ScenarioConfig cfg = parse_scenario(doc);
  PreparedScenario sc = prepare(cfg);
  out << "m=" << cfg.grid.bin_count() << '\n';
  out << "free_bins=" << cfg.grid.free_bins().size() << '\n';
  out << "layers=" << sc.layers.count() << '\n';
  out << "strong_connectivity=OK\n";
  out << doc.dump(2) << '\n';
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    write_json_file(fs::path(o.out_dir) / "config_resolved.json", doc);
  }
  return kExitOk;
}

int cmd_plan(const Options& o, std::ostream& out) {
  json doc = load_resolved(o);
  ScenarioConfig cfg = parse_scenario(doc);
  auto t0 = std::chrono::steady_clock::now();
  PlanResult p = plan_only(cfg);
  json j = plan_json(p);
  out << "chosen_layer=" << p.plan.projection.layer_index << '\n'
      << "t_fc=" << p.plan.projection.t_fc << '\n'
      << "t_lc=" << p.plan.projection.t_lc << '\n'
      << "L_r_hat=" << j["estimated_entrants"].dump() << '\n'
      << "ratio=" << j["estimated_ratio"].dump() << '\n'
      << "epsilon_opt=" << cfg.strategy.epsilon_opt << '\n'
      << "runtime_s=" << seconds_since(t0) << '\n';
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    write_json_file(fs::path(o.out_dir) / "plan.json", j);
    write_json_file(fs::path(o.out_dir) / "config_resolved.json", doc);
  }
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out) {
  json doc = load_resolved(o);
  ScenarioConfig cfg = parse_scenario(doc);
  auto t0 = std::chrono::steady_clock::now();
  RunResult r = run(cfg);
  json s = summary_json(r.summary);
  out << s.dump(2) << '\n' << "runtime_s=" << seconds_since(t0) << '\n';
  if (!o.out_dir.empty()) {
    write_run_files(o.out_dir, cfg, r, o.heatmaps);
    write_json_file(fs::path(o.out_dir) / "config_resolved.json", doc);
  }
  return kExitOk;
}

int cmd_ensemble(const Options& o, std::ostream& out) {
  json doc = load_resolved(o);
  ScenarioConfig cfg = parse_scenario(doc);
  auto t0 = std::chrono::steady_clock::now();
  std::function<void(std::size_t, const RunResult&)> each;
  if (!o.out_dir.empty()) {
    each = [&](std::size_t k, const RunResult& r) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%04zu", k);
      ScenarioConfig c = cfg;
      c.seed = cfg.seed + k;
      write_run_files(fs::path(o.out_dir) / name, c, r, o.heatmaps);
    };
  }
  EnsembleStats stats = run_ensemble(cfg, o.runs, o.threads, each);
  json j = ensemble_json(stats);
  out << "runs=" << stats.runs << '\n'
      << "entered_mean=" << json(stats.entered.mean).dump() << '\n'
      << "entered_stddev=" << json(stats.entered.stddev).dump() << '\n'
      << "estimated_entrants_mean=" << json(stats.L_r_hat.mean).dump() << '\n'
      << "runtime_s=" << seconds_since(t0) << '\n';
  if (!o.out_dir.empty()) {
    write_json_file(fs::path(o.out_dir) / "ensemble.json", j);
    write_json_file(fs::path(o.out_dir) / "config_resolved.json", doc);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Swarm-to-swarm engagement simulator"};
  app.require_subcommand(1);
  Options o;
  auto* run_cmd = app.add_subcommand("run", "simulate one engagement");
  auto* ens_cmd = app.add_subcommand("ensemble", "simulate several seeds");
  auto* plan_cmd = app.add_subcommand("plan", "choose the boundary layer without simulating");
  auto* val_cmd = app.add_subcommand("validate", "check a scenario and echo it resolved");
  for (auto* sub : {run_cmd, ens_cmd, plan_cmd, val_cmd}) add_common(sub, o);
  for (auto* sub : {run_cmd, ens_cmd}) {
    sub->add_flag("--heatmaps", o.heatmaps, "write per-step pixmaps");
  }
  ens_cmd->add_option("--runs", o.runs, "number of seeds")->check(CLI::PositiveNumber);
  ens_cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitConfigError;
  }

  try {
    if (*val_cmd) return cmd_validate(o, out);
    if (*plan_cmd) return cmd_plan(o, out);
    if (*run_cmd) return cmd_run(o, out);
    return cmd_ensemble(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InfeasibleError& e) {
    err << "infeasible scenario: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const SwarmError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace swarmengage
