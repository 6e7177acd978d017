#include <set>
#include <string>

#include <gtest/gtest.h>

#include "neorl/config.hpp"

using namespace neorl;

TEST(Config, EmptyDocumentGivesDefaults) {
  const RunConfig c = parse_run_config("{}");
  EXPECT_EQ(c.env, EnvConfig{});
  EXPECT_EQ(c.n_runs, 20);
  EXPECT_EQ(c.bin_width_s, 0.2);
  EXPECT_EQ(c.filter.cutoff_normalized, 0.01);
  EXPECT_EQ(c.agent.resolutions, prime_resolutions());
}

TEST(Config, ReadsEveryField) {
  const RunConfig c = parse_run_config(R"({
    "env": {"dt": 0.05, "thrust": 3, "damping": 0.9, "agent_radius": 0.02, "object_radius": 0.04,
            "object_count": 2, "speed_range": [0.1, 0.2], "spawn_min_dist": 0.15,
            "green_probability": 0.7, "board_reset": false, "seed": 9},
    "agent": {"control": false, "modalities": ["OVC"], "resolutions": [3, 7], "alpha": 0.5,
              "gamma": 0.8, "epsilon": 0.05},
    "duration_s": 30, "bin_width_s": 0.5, "n_runs": 3, "base_seed": 18446744073709551615,
    "filter": {"order": 1, "cutoff_normalized": 0.02}})");
  EXPECT_EQ(c.env.dt, 0.05);
  EXPECT_EQ(c.env.object_count, 2);
  EXPECT_EQ(c.env.speed_min, 0.1);
  EXPECT_EQ(c.env.speed_max, 0.2);
  EXPECT_FALSE(c.env.board_reset);
  EXPECT_EQ(c.env.seed, 9u);
  EXPECT_EQ(c.agent.modalities, std::vector<Modality>{Modality::OVC});
  EXPECT_EQ(c.agent.resolutions, (std::vector<int>{3, 7}));
  EXPECT_EQ(c.agent.learner.gamma, 0.8);
  EXPECT_EQ(c.base_seed, 18446744073709551615ULL);
  EXPECT_EQ(c.filter.cutoff_normalized, 0.02);
}

TEST(Config, UnknownKeysAreNamed) {
  auto message = [](const std::string& text) {
    try {
      parse_run_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"durration_s": 3})").find("durration_s"), std::string::npos);
  EXPECT_NE(message(R"({"env": {"thrustt": 3}})").find("env.thrustt"), std::string::npos);
  EXPECT_NE(message(R"({"agent": {"gama": 0.5}})").find("agent.gama"), std::string::npos);
  EXPECT_NE(message(R"({"filter": {"cutoff": 0.5}})").find("filter.cutoff"), std::string::npos);
}

TEST(Config, ConstraintsEnforcedOnLoad) {
  EXPECT_THROW(parse_run_config(R"({"n_runs": 0})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"env": {"speed_range": [0.3, 0.1]}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"env": {"speed_range": 0.3}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"agent": {"modalities": ["GRID"]}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"agent": {"resolutions": [5, 3]}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"filter": {"order": 2}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"base_seed": -1})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"n_runs": "many"})"), ConfigError);
  EXPECT_THROW(parse_run_config("{not json"), ConfigError);
  EXPECT_THROW(parse_run_config("[]"), ConfigError);
}

TEST(Config, RoundTrip) {
  for (const auto& name : preset_names()) {
    for (const auto& v : expand_preset(name)) {
      const RunConfig back = parse_run_config(dump_config(v.config));
      EXPECT_EQ(dump_config(back), dump_config(v.config)) << v.name;
      EXPECT_EQ(back.env, v.config.env);
    }
  }
}

TEST(Presets, Expansion) {
  auto names = [](const std::vector<Variant>& vs) {
    std::set<std::string> out;
    for (const auto& v : vs) out.insert(v.name);
    return out;
  };
  EXPECT_EQ(names(expand_preset("exp2_multimodal")), (std::set<std::string>{"pc", "ovc", "multimodal"}));
  const auto sweep = expand_preset("resolution_sweep");
  EXPECT_EQ(sweep.size(), 9u);
  for (const auto& v : sweep) {
    EXPECT_EQ(v.config.env.object_count, 1);
    EXPECT_EQ(v.config.env.green_probability, 1.0);
    EXPECT_EQ(v.config.duration_s, 900.0);
  }
  EXPECT_TRUE(sweep.back().config.agent.control);
  const auto pc = expand_preset("exp1_pc");
  EXPECT_EQ(pc.size(), 7u);
  EXPECT_EQ(pc[0].config.agent.resolutions, prime_resolutions());
  for (std::size_t i = 1; i < pc.size(); ++i) EXPECT_EQ(pc[i].config.agent.resolutions.size(), 1u);
  const auto ctl = expand_preset("control");
  ASSERT_EQ(ctl.size(), 1u);
  EXPECT_TRUE(ctl[0].config.agent.control);
  EXPECT_EQ(ctl[0].config.agent.epsilon, 1.0);
  EXPECT_THROW(expand_preset("exp3"), ConfigError);
}
