#include "swarmengage/scenario.hpp"

#include <fstream>
#include <set>

namespace swarmengage {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::set<std::string>& allowed, const char* where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

const json& require(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key)) {
    throw ConfigError(std::string("missing key '") + key + "' in " + where);
  }
  return obj.at(key);
}

std::vector<std::size_t> index_list(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(std::string(what) + " entries must be nonnegative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

BinSet box_bins(const GridSpec& grid, const json& box) {
  only_keys(box, {"min", "max"}, "box");
  return grid.box(index_list(require(box, "min", "box"), "box min"),
                  index_list(require(box, "max", "box"), "box max"));
}

BinSet outside_base(const GridSpec& grid) {
  BinSet out;
  for (Bin b : grid.free_bins()) {
    if (!grid.is_base(b)) out.push_back(b);
  }
  return out;
}

// A region is a box, a list of boxes, or one of the named shorthands.
BinSet region(const GridSpec& grid, const json& spec, const char* where) {
  if (spec.is_string()) {
    auto name = spec.get<std::string>();
    if (name == "base") return grid.base_bins();
    if (name == "uniform_outside_base") return outside_base(grid);
    throw ConfigError(std::string("unknown region '") + name + "' in " + where);
  }
  if (spec.is_array()) {
    BinSet out;
    for (const auto& box : spec) {
      auto b = box_bins(grid, box);
      out.insert(out.end(), b.begin(), b.end());
    }
    return normalize(std::move(out));
  }
  return box_bins(grid, spec);
}

template <typename T>
T number(const json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
      throw ConfigError(std::string(what) + " must be a nonnegative integer");
    }
  }
  return j.get<T>();
}

GridSpec parse_grid(const json& g) {
  only_keys(g, {"dims", "obstacles", "base"}, "grid");
  auto dims = index_list(require(g, "dims", "grid"), "grid dims");
  // boxes need a grid to resolve, so build one without obstacles first
  GridSpec bare(dims, {}, {0});
  BinSet obstacles;
  if (g.contains("obstacles")) {
    const auto& obs = g.at("obstacles");
    if (!obs.is_array()) throw ConfigError("grid obstacles must be an array of boxes");
    for (const auto& box : obs) {
      auto b = box_bins(bare, box);
      obstacles.insert(obstacles.end(), b.begin(), b.end());
    }
  }
  BinSet base = box_bins(bare, require(g, "base", "grid"));
  return GridSpec(dims, std::move(obstacles), std::move(base));
}

std::size_t bin_count_of(const json& doc) {
  std::size_t m = 1;
  for (auto d : index_list(require(require(doc, "grid", "scenario"), "dims", "grid"), "grid dims")) {
    m *= d;
  }
  return m;
}

}  // namespace

json load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

json resolve_scenario(const json& doc) {
  only_keys(doc, {"grid", "red", "blue", "strategy", "sim"}, "scenario");
  const std::size_t m = bin_count_of(doc);
  json out = doc;
  auto& red = out["red"];
  only_keys(red, {"count", "init", "v_b"}, "red");
  if (!red.contains("v_b")) red["v_b"] = "uniform";
  auto& blue = out["blue"];
  only_keys(blue, {"count", "init"}, "blue");
  if (!blue.contains("init")) blue["init"] = "base";
  if (!out.contains("strategy")) out["strategy"] = json::object();
  auto& st = out["strategy"];
  only_keys(st, {"epsilon_opt", "option", "mass_tolerance", "horizon_cap"}, "strategy");
  if (!st.contains("epsilon_opt")) st["epsilon_opt"] = 0.1;
  if (!st.contains("option")) st["option"] = "freeze";
  if (!st.contains("mass_tolerance")) st["mass_tolerance"] = 1e-9;
  if (!st.contains("horizon_cap") || st["horizon_cap"] == 0) st["horizon_cap"] = 50 * m;
  if (!out.contains("sim")) out["sim"] = json::object();
  auto& sim = out["sim"];
  only_keys(sim, {"max_steps", "seed"}, "sim");
  if (!sim.contains("max_steps") || sim["max_steps"] == 0) sim["max_steps"] = 50 * m;
  if (!sim.contains("seed")) sim["seed"] = 0;
  // typed parse doubles as validation of the filled document
  parse_scenario(out);
  return out;
}

ScenarioConfig parse_scenario(const json& doc) {
  try {
    only_keys(doc, {"grid", "red", "blue", "strategy", "sim"}, "scenario");
    GridSpec grid = parse_grid(require(doc, "grid", "scenario"));

    const auto& r = require(doc, "red", "scenario");
    only_keys(r, {"count", "init", "v_b"}, "red");
    RedSetup red;
    red.count = number<std::size_t>(require(r, "count", "red"), "red count");
    red.init_region = region(grid, require(r, "init", "red"), "red init");
    if (r.contains("v_b") && !(r.at("v_b").is_string() && r.at("v_b") == "uniform")) {
      const auto& w = r.at("v_b");
      if (!w.is_array()) throw ConfigError("red v_b must be \"uniform\" or an array");
      for (const auto& x : w) red.base_weights.push_back(number<double>(x, "v_b weight"));
    }

    const auto& b = require(doc, "blue", "scenario");
    only_keys(b, {"count", "init"}, "blue");
    BlueSetup blue;
    blue.count = number<std::size_t>(require(b, "count", "blue"), "blue count");
    blue.init_region = region(grid, b.contains("init") ? b.at("init") : json("base"), "blue init");

    StrategyConfig st;
    if (doc.contains("strategy")) {
      const auto& s = doc.at("strategy");
      only_keys(s, {"epsilon_opt", "option", "mass_tolerance", "horizon_cap"}, "strategy");
      if (s.contains("epsilon_opt")) st.epsilon_opt = number<double>(s.at("epsilon_opt"), "epsilon_opt");
      if (s.contains("option")) {
        if (!s.at("option").is_string()) throw ConfigError("option must be a string");
        st.option = parse_phase_option(s.at("option").get<std::string>());
      }
      if (s.contains("mass_tolerance")) {
        st.mass_tolerance = number<double>(s.at("mass_tolerance"), "mass_tolerance");
      }
      if (s.contains("horizon_cap")) {
        st.horizon_cap = number<std::size_t>(s.at("horizon_cap"), "horizon_cap");
      }
    }
    st.validate();

    std::size_t max_steps = 0;
    std::uint64_t seed = 0;
    if (doc.contains("sim")) {
      const auto& s = doc.at("sim");
      only_keys(s, {"max_steps", "seed"}, "sim");
      if (s.contains("max_steps")) max_steps = number<std::size_t>(s.at("max_steps"), "max_steps");
      if (s.contains("seed")) seed = number<std::uint64_t>(s.at("seed"), "seed");
    }
    return ScenarioConfig{std::move(grid), std::move(red), std::move(blue), st, max_steps, seed};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
}

json apply_overrides(json doc, const ScenarioOverrides& o) {
  if (o.seed) doc["sim"]["seed"] = *o.seed;
  if (o.option) doc["strategy"]["option"] = to_string(*o.option);
  return doc;
}

}  // namespace swarmengage
