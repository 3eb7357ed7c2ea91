#pragma once

#include <filesystem>
#include <iosfwd>
#include <json.hpp>

#include "swarmengage/simulator.hpp"

namespace swarmengage {

/// Header of the per-step, per-bin CSV.
inline constexpr const char* kBinCsvHeader = "step,bin,s_b,s_r,eliminated,entered_cum";

void write_bin_csv(std::ostream& os, const std::vector<StepRecord>& records);
/// One row per step: populations, eliminations, entrants, phase, blue TV.
void write_timeline_csv(std::ostream& os, const std::vector<StepRecord>& records);

nlohmann::json summary_json(const RunSummary& s);
nlohmann::json plan_json(const PlanResult& p);
nlohmann::json ensemble_json(const EnsembleStats& stats);

/// Plain (P3) pixmap of one 2D slice of per-bin counts. Brightness follows
/// count / population, scaled to the busiest bin; obstacles are black.
void write_heatmap(std::ostream& os, const GridSpec& grid, const std::vector<long>& counts,
                   bool blue, std::size_t slice = 0);

/// Writes one pixmap per step and swarm (and per slice along the last axis
/// for 3D grids) into `dir`.
void write_heatmaps(const std::filesystem::path& dir, const GridSpec& grid,
                    const std::vector<StepRecord>& records);

/// Writes `doc` as indented JSON with a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace swarmengage
