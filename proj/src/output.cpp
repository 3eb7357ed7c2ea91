#include "swarmengage/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace swarmengage {

using nlohmann::json;

void write_bin_csv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << kBinCsvHeader << '\n';
  for (const auto& r : records) {
    for (std::size_t b = 0; b < r.s_b.size(); ++b) {
      os << r.step << ',' << b << ',' << r.s_b[b] << ',' << r.s_r[b] << ','
         << r.eliminated[b] << ',' << r.entered_cum << '\n';
    }
  }
}

void write_timeline_csv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << "step,phase,N_b,N_r,eliminated,entered_cum,blue_tv\n";
  char buf[32];
  for (const auto& r : records) {
    long killed = 0;
    for (long e : r.eliminated) killed += e;
    os << r.step << ',' << r.phase << ',' << r.N_b << ',' << r.N_r << ',' << killed << ','
       << r.entered_cum << ',';
    if (r.blue_tv) {
      std::snprintf(buf, sizeof buf, "%.9f", *r.blue_tv);
      os << buf;
    }
    os << '\n';
  }
}

namespace {

json optional_index(const std::optional<std::size_t>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json summary_json(const RunSummary& s) {
  json j;
  j["desired_ratio"] = s.epsilon_opt;
  j["estimated_tv"] = s.estimated_ratio;
  j["blue_agents"] = s.initial_N_b;
  j["red_agents"] = s.initial_N_r;
  j["estimated_entrants"] = s.L_r_hat;
  j["estimated_entrants_rounded"] = std::lround(s.L_r_hat);
  j["entered"] = s.entered;
  j["chosen_layer"] = s.chosen_layer;
  j["t_fc"] = s.t_fc;
  j["t_lc"] = s.t_lc;
  j["option"] = to_string(s.option);
  j["seed"] = s.seed;
  j["final_blue"] = s.final_N_b;
  j["final_red"] = s.final_N_r;
  j["steps"] = s.steps;
  j["termination"] = to_string(s.termination);
  j["contact_step"] = optional_index(s.contact_step);
  j["first_elimination_step"] = optional_index(s.first_elimination_step);
  j["resyntheses"] = s.resyntheses;
  j["degenerate_plan"] = s.degenerate_plan;
  j["warnings"] = s.plan_warnings;
  return j;
}

json plan_json(const PlanResult& p) {
  const auto& plan = p.plan;
  json j;
  j["chosen_layer"] = plan.projection.layer_index;
  j["t_fc"] = plan.projection.t_fc;
  j["t_lc"] = plan.projection.t_lc;
  j["estimated_entrants"] = plan.L_r_hat;
  j["estimated_entrants_rounded"] = std::lround(plan.L_r_hat);
  j["estimated_ratio"] = plan.ratio();
  j["blue_agents"] = p.N_b;
  j["red_agents"] = p.N_r;
  j["layer_count"] = p.scenario.layers.count();
  j["degenerate_plan"] = plan.degenerate;
  j["warnings"] = plan.warnings;
  json target = json::object();
  for (Bin b : plan.projection.x_rs_hat.support()) {
    target[std::to_string(b)] = plan.projection.x_rs_hat[b];
  }
  j["blue_target"] = target;
  return j;
}

json ensemble_json(const EnsembleStats& stats) {
  auto ms = [](const MeanStd& m) { return json{{"mean", m.mean}, {"stddev", m.stddev}}; };
  json j;
  j["runs"] = stats.runs;
  j["entered"] = ms(stats.entered);
  j["blue_lost"] = ms(stats.blue_lost);
  j["red_lost"] = ms(stats.red_lost);
  j["estimated_entrants"] = ms(stats.L_r_hat);
  j["mean_blue_tv"] = stats.mean_blue_tv;
  json runs = json::array();
  for (const auto& s : stats.summaries) runs.push_back(summary_json(s));
  j["per_run"] = runs;
  return j;
}

void write_heatmap(std::ostream& os, const GridSpec& grid, const std::vector<long>& counts,
                   bool blue, std::size_t slice) {
  constexpr std::size_t kScale = 8;
  const auto& dims = grid.dims();
  const std::size_t rows = dims[0];
  const std::size_t cols = dims[1];
  auto bin_at = [&](std::size_t r, std::size_t c) {
    std::vector<std::size_t> coords{r, c};
    if (dims.size() == 3) coords.push_back(slice);
    return grid.linear_index(coords);
  };
  long busiest = 0;
  long total = 0;
  for (long c : counts) total += c;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) busiest = std::max(busiest, counts[bin_at(r, c)]);
  }
  os << "P3\n" << cols * kScale << ' ' << rows * kScale << "\n255\n";
  for (std::size_t py = 0; py < rows * kScale; ++py) {
    for (std::size_t px = 0; px < cols * kScale; ++px) {
      Bin b = bin_at(py / kScale, px / kScale);
      int rgb[3] = {255, 255, 255};
      if (grid.is_obstacle(b)) {
        rgb[0] = rgb[1] = rgb[2] = 0;
      } else if (busiest > 0 && total > 0 && counts[b] > 0) {
        double share = static_cast<double>(counts[b]) / static_cast<double>(total);
        double peak = static_cast<double>(busiest) / static_cast<double>(total);
        int fade = static_cast<int>(std::lround(255.0 * share / peak));
        if (blue) {
          rgb[0] = rgb[1] = 255 - fade;
        } else {
          rgb[1] = rgb[2] = 255 - fade;
        }
      } else if (grid.is_base(b)) {
        rgb[0] = rgb[2] = 200;  // base tint
      }
      os << rgb[0] << ' ' << rgb[1] << ' ' << rgb[2] << (px + 1 == cols * kScale ? '\n' : ' ');
    }
  }
}

void write_heatmaps(const std::filesystem::path& dir, const GridSpec& grid,
                    const std::vector<StepRecord>& records) {
  std::filesystem::create_directories(dir);
  const std::size_t slices = grid.dims().size() == 3 ? grid.dims()[2] : 1;
  char name[64];
  for (const auto& r : records) {
    for (int color = 0; color < 2; ++color) {
      for (std::size_t z = 0; z < slices; ++z) {
        if (slices > 1) {
          std::snprintf(name, sizeof name, "%s_%04zu_z%zu.ppm", color ? "red" : "blue", r.step, z);
        } else {
          std::snprintf(name, sizeof name, "%s_%04zu.ppm", color ? "red" : "blue", r.step);
        }
        std::ofstream f(dir / name);
        write_heatmap(f, grid, color ? r.s_r : r.s_b, color == 0, z);
      }
    }
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << doc.dump(2) << '\n';
}

}  // namespace swarmengage
