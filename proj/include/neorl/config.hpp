#pragma once

// JSON run configs and the named experiment presets.
//
// Every key is optional; omitted keys keep their defaults. Unknown keys are
// rejected with the dotted path of the offending key.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "neorl/harness.hpp"

namespace neorl {

using json = nlohmann::json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError((where.empty() ? std::string("config") : where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("unknown config key '" + (where.empty() ? "" : where + ".") + item.key() + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, const std::string& where, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + (where.empty() ? "" : where + ".") + key + "'");
  }
}

inline void read_u64(const json& j, const char* key, const std::string& where, std::uint64_t& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() && it->get<std::int64_t>() < 0)) {
    throw ConfigError("'" + (where.empty() ? "" : where + ".") + key + "' must be a non-negative integer");
  }
  out = it->get<std::uint64_t>();
}

}  // namespace detail

inline json to_json(const EnvConfig& c) {
  return {{"dt", c.dt},
          {"thrust", c.thrust},
          {"damping", c.damping},
          {"agent_radius", c.agent_radius},
          {"object_radius", c.object_radius},
          {"object_count", c.object_count},
          {"speed_range", {c.speed_min, c.speed_max}},
          {"spawn_min_dist", c.spawn_min_dist},
          {"green_probability", c.green_probability},
          {"board_reset", c.board_reset},
          {"seed", c.seed}};
}

inline EnvConfig env_from_json(const json& j, EnvConfig c = {}) {
  const std::string w = "env";
  detail::check_keys(j, w,
                     {"dt", "thrust", "damping", "agent_radius", "object_radius", "object_count", "speed_range",
                      "spawn_min_dist", "green_probability", "board_reset", "seed"});
  detail::read(j, "dt", w, c.dt);
  detail::read(j, "thrust", w, c.thrust);
  detail::read(j, "damping", w, c.damping);
  detail::read(j, "agent_radius", w, c.agent_radius);
  detail::read(j, "object_radius", w, c.object_radius);
  detail::read(j, "object_count", w, c.object_count);
  if (auto it = j.find("speed_range"); it != j.end()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
      throw ConfigError("'env.speed_range' must be [min, max]");
    }
    c.speed_min = (*it)[0].get<double>();
    c.speed_max = (*it)[1].get<double>();
  }
  detail::read(j, "spawn_min_dist", w, c.spawn_min_dist);
  detail::read(j, "green_probability", w, c.green_probability);
  detail::read(j, "board_reset", w, c.board_reset);
  detail::read_u64(j, "seed", w, c.seed);
  return c;
}

inline json to_json(const AgentSpec& a) {
  json mods = json::array();
  for (Modality m : a.modalities) mods.push_back(to_string(m));
  return {{"control", a.control},       {"modalities", mods},        {"resolutions", a.resolutions},
          {"alpha", a.learner.alpha},   {"gamma", a.learner.gamma}, {"epsilon", a.epsilon}};
}

inline AgentSpec agent_from_json(const json& j, AgentSpec a = {}) {
  const std::string w = "agent";
  detail::check_keys(j, w, {"control", "modalities", "resolutions", "alpha", "gamma", "epsilon"});
  detail::read(j, "control", w, a.control);
  if (auto it = j.find("modalities"); it != j.end()) {
    std::vector<std::string> names;
    detail::read(j, "modalities", w, names);
    a.modalities.clear();
    for (const auto& n : names) {
      try {
        a.modalities.push_back(modality_from_string(n));
      } catch (const std::invalid_argument&) {
        throw ConfigError("unknown modality '" + n + "' in 'agent.modalities'");
      }
    }
  }
  detail::read(j, "resolutions", w, a.resolutions);
  detail::read(j, "alpha", w, a.learner.alpha);
  detail::read(j, "gamma", w, a.learner.gamma);
  detail::read(j, "epsilon", w, a.epsilon);
  return a;
}

inline json to_json(const RunConfig& c) {
  return {{"env", to_json(c.env)},
          {"agent", to_json(c.agent)},
          {"duration_s", c.duration_s},
          {"bin_width_s", c.bin_width_s},
          {"n_runs", c.n_runs},
          {"base_seed", c.base_seed},
          {"filter", {{"order", c.filter.order}, {"cutoff_normalized", c.filter.cutoff_normalized}}}};
}

/// Parses and validates a run config. Throws ConfigError on any problem.
inline RunConfig run_config_from_json(const json& j, RunConfig c = {}) {
  detail::check_keys(j, "", {"env", "agent", "duration_s", "bin_width_s", "n_runs", "base_seed", "filter"});
  if (auto it = j.find("env"); it != j.end()) c.env = env_from_json(*it, c.env);
  if (auto it = j.find("agent"); it != j.end()) c.agent = agent_from_json(*it, c.agent);
  detail::read(j, "duration_s", "", c.duration_s);
  detail::read(j, "bin_width_s", "", c.bin_width_s);
  detail::read(j, "n_runs", "", c.n_runs);
  detail::read_u64(j, "base_seed", "", c.base_seed);
  if (auto it = j.find("filter"); it != j.end()) {
    detail::check_keys(*it, "filter", {"order", "cutoff_normalized"});
    detail::read(*it, "order", "filter", c.filter.order);
    detail::read(*it, "cutoff_normalized", "filter", c.filter.cutoff_normalized);
  }
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return run_config_from_json(j);
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

inline std::string dump_config(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

// Presets.

struct Variant {
  std::string name;  // output file stem
  RunConfig config;
};

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"exp1_pc", "exp1_ovc", "exp2_multimodal", "resolution_sweep",
                                                 "control"};
  return names;
}

/// Shared settings of the three-object experiments.
inline RunConfig experiment_base() {
  RunConfig c;
  c.duration_s = 1200.0;
  c.n_runs = 20;
  c.agent.learner.gamma = 0.7;
  return c;
}

inline RunConfig control_config(RunConfig c) {
  c.agent = AgentSpec{};
  c.agent.control = true;
  c.agent.epsilon = 1.0;
  return c;
}

inline RunConfig with_agent(RunConfig c, std::vector<Modality> modalities, std::vector<int> resolutions) {
  c.agent.control = false;
  c.agent.modalities = std::move(modalities);
  c.agent.resolutions = std::move(resolutions);
  return c;
}

inline std::vector<Variant> modality_variants(const RunConfig& base, Modality m) {
  const std::string stem = m == Modality::PC ? "pc" : "ovc";
  std::vector<Variant> out{{stem, with_agent(base, {m}, prime_resolutions())}};
  for (int n : prime_resolutions()) out.push_back({stem + "_n" + std::to_string(n), with_agent(base, {m}, {n})});
  return out;
}

/// Single green object of constant value, 15 minutes per run.
inline RunConfig sweep_base() {
  RunConfig c = experiment_base();
  c.duration_s = 900.0;
  c.env.object_count = 1;
  c.env.green_probability = 1.0;
  return c;
}

inline const std::vector<int>& sweep_resolutions() {
  static const std::vector<int> r = {5, 10, 15, 20, 25, 30, 35, 40};
  return r;
}

inline std::vector<Variant> expand_preset(const std::string& name) {
  if (name == "exp1_pc") return modality_variants(experiment_base(), Modality::PC);
  if (name == "exp1_ovc") return modality_variants(experiment_base(), Modality::OVC);
  if (name == "exp2_multimodal") {
    const RunConfig b = experiment_base();
    return {{"pc", with_agent(b, {Modality::PC}, prime_resolutions())},
            {"ovc", with_agent(b, {Modality::OVC}, prime_resolutions())},
            {"multimodal", with_agent(b, {Modality::PC, Modality::OVC}, prime_resolutions())}};
  }
  if (name == "resolution_sweep") {
    const RunConfig b = sweep_base();
    std::vector<Variant> out;
    for (int n : sweep_resolutions()) out.push_back({"n" + std::to_string(n), with_agent(b, {Modality::PC}, {n})});
    out.push_back({"control", control_config(b)});
    return out;
  }
  if (name == "control") return {{"control", control_config(experiment_base())}};
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + name + "'; available: " + list);
}

}  // namespace neorl
