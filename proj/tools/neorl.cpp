// neorl: run experiments, reproduce presets, self-check, calibrate.
//
// Exit codes: 0 ok, 1 check or runtime failure, 2 usage or config error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "neorl/neorl.hpp"

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;
  int threads = 0;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--runs", o.runs, "Number of independent runs")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Base seed (run k uses seed XOR k)");
  cmd->add_option("--duration", o.duration_s, "Simulated seconds per run")->check(CLI::NonNegativeNumber);
  cmd->add_option("--threads", o.threads, "Worker threads (default: NEORL_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
}

void apply(const Overrides& o, neorl::RunConfig& c) {
  if (o.runs) c.n_runs = *o.runs;
  if (o.seed) c.base_seed = *o.seed;
  if (o.duration_s) c.duration_s = *o.duration_s;
  c.validate();
}

int threads_of(const Overrides& o) { return o.threads > 0 ? o.threads : neorl::default_thread_count(); }

void write_text(const fs::path& p, const std::string& text) {
  neorl::write_file(p.string(), [&](std::ostream& out) { out << text; });
}

int cmd_run(const std::string& config_path, const fs::path& out_dir, bool raw, const Overrides& o) {
  neorl::RunConfig cfg = neorl::load_run_config(config_path);
  apply(o, cfg);
  fs::create_directories(out_dir);
  const auto result = neorl::run_experiment(cfg, threads_of(o));
  neorl::write_file((out_dir / "aggregate.csv").string(),
                    [&](std::ostream& out) { neorl::write_aggregate_csv(out, result.filtered); });
  if (raw) {
    neorl::write_file((out_dir / "raw.csv").string(),
                      [&](std::ostream& out) { neorl::write_raw_csv(out, result.run_logs); });
  }
  write_text(out_dir / "resolved_config.json", neorl::dump_config(cfg));
  std::printf("final 5 min mean: %.4f R/s over %d runs\n",
              neorl::mean_after(result.averaged, cfg.duration_s - 300.0), cfg.n_runs);
  return 0;
}

int cmd_reproduce(const std::string& preset, const fs::path& out_dir, const Overrides& o) {
  auto variants = neorl::expand_preset(preset);
  fs::create_directories(out_dir / "configs");
  for (auto& v : variants) {
    apply(o, v.config);
    const auto result = neorl::run_experiment(v.config, threads_of(o));
    neorl::write_file((out_dir / (v.name + ".csv")).string(),
                      [&](std::ostream& out) { neorl::write_aggregate_csv(out, result.filtered); });
    write_text(out_dir / "configs" / (v.name + ".json"), neorl::dump_config(v.config));
    std::printf("%-12s final 5 min mean: %.4f R/s\n", v.name.c_str(),
                neorl::mean_after(result.averaged, v.config.duration_s - 300.0));
    std::fflush(stdout);
  }
  return 0;
}

int cmd_calibrate(const std::optional<std::string>& config_path, double duration_s, std::optional<std::uint64_t> seed) {
  neorl::EnvConfig env;
  if (config_path) env = neorl::load_run_config(*config_path).env;
  if (seed) env.seed = *seed;
  const double interval = neorl::random_policy_calibration(env, duration_s);
  std::printf("mean encounter interval: %.3f s (random actor, %d objects, %.0f s)\n", interval, env.object_count,
              duration_s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"neoRL navigation experiments"};
  app.require_subcommand(1);

  Overrides run_o, rep_o;
  std::string config_path;
  fs::path run_out = "out";
  bool raw = false;
  auto* run = app.add_subcommand("run", "Run one configured experiment");
  run->add_option("--config", config_path, "Run config JSON")->required();
  run->add_option("--out", run_out, "Output directory");
  run->add_flag("--raw", raw, "Also write raw.csv with every reward event");
  add_overrides(run, run_o);

  std::string preset;
  fs::path rep_out = "out";
  auto* rep = app.add_subcommand("reproduce", "Run every variant of a named preset");
  rep->add_option("preset", preset, "exp1_pc | exp1_ovc | exp2_multimodal | resolution_sweep | control")->required();
  rep->add_option("--out", rep_out, "Output directory");
  add_overrides(rep, rep_o);

  bool corrupt = false;
  auto* check = app.add_subcommand("selfcheck", "Oracle, partition and filter checks");
  check->add_flag("--corrupt-update", corrupt, "Test hook: check a deliberately broken update rule");

  std::optional<std::string> cal_config;
  double cal_duration = 3600.0;
  std::optional<std::uint64_t> cal_seed;
  auto* cal = app.add_subcommand("calibrate", "Mean encounter interval of a random actor");
  cal->add_option("--config", cal_config, "Run config JSON (env section is used)");
  cal->add_option("--duration", cal_duration, "Simulated seconds (>= 600)");
  cal->add_option("--seed", cal_seed, "Env seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(config_path, run_out, raw, run_o);
    if (*rep) return cmd_reproduce(preset, rep_out, rep_o);
    if (*check) {
      const auto results = neorl::run_selfchecks(corrupt ? &neorl::corrupted_update : &neorl::update);
      return neorl::report(results, std::cout) ? 0 : 1;
    }
    if (*cal) return cmd_calibrate(cal_config, cal_duration, cal_seed);
  } catch (const neorl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
