#pragma once

// Experiment harness: independent seeded runs, reward binning into R/s,
// cross-run averaging and first-order Butterworth smoothing.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "neorl/agent.hpp"
#include "neorl/waterworld.hpp"

namespace neorl {

struct FilterConfig {
  int order = 1;
  double cutoff_normalized = 0.01;  // cycles per sample

  void validate() const {
    if (order != 1) throw std::invalid_argument("only first-order Butterworth filters are supported");
    if (!(cutoff_normalized > 0.0 && cutoff_normalized < 0.5)) {
      throw std::invalid_argument("cutoff_normalized must be in (0, 0.5)");
    }
  }
};

struct RunConfig {
  EnvConfig env;
  AgentSpec agent;
  double duration_s = 1200.0;
  double bin_width_s = 0.2;
  int n_runs = 20;
  std::uint64_t base_seed = 1;
  FilterConfig filter;

  void validate() const {
    env.validate();
    agent.validate();
    filter.validate();
    if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) throw std::invalid_argument("duration_s must be >= 0");
    if (!(bin_width_s > 0.0)) throw std::invalid_argument("bin_width_s must be > 0");
    if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  }
};

struct ProficiencySeries {
  double bin_width_s = 0.2;
  std::vector<double> values;  // R/s per bin
  int n_runs_averaged = 1;

  bool operator==(const ProficiencySeries&) const = default;
};

inline std::uint64_t run_seed(std::uint64_t base_seed, int run_idx) {
  return base_seed ^ static_cast<std::uint64_t>(run_idx);
}

inline std::int64_t tick_count(double duration_s, double dt) {
  return static_cast<std::int64_t>(std::llround(duration_s / dt));
}

/// One isolated run: fresh env, fresh zero-initialized agent.
inline std::vector<RewardEvent> run_single(const RunConfig& cfg, int run_idx) {
  EnvConfig env_cfg = cfg.env;
  env_cfg.seed = run_seed(cfg.base_seed, run_idx);
  Env env(env_cfg);
  NeoRLAgent agent(cfg.agent, env_cfg.object_count, mix_seed(env_cfg.seed));

  std::vector<RewardEvent> events;
  Observation obs = env.observation();
  agent.learn(obs, Action::N, {});  // primes the trackers

  std::vector<int> ids(obs.objects.size());
  std::vector<bool> respawned(obs.objects.size(), false);
  const std::int64_t ticks = tick_count(cfg.duration_s, env_cfg.dt);
  for (std::int64_t t = 0; t < ticks; ++t) {
    for (std::size_t i = 0; i < obs.objects.size(); ++i) ids[i] = obs.objects[i].id;
    const Action a = agent.act(obs);
    env.step_into(a, events);
    obs = env.observation();
    for (std::size_t i = 0; i < obs.objects.size(); ++i) respawned[i] = obs.objects[i].id != ids[i];
    agent.learn(obs, a, respawned);
  }
  return events;
}

inline std::size_t bin_count(double duration_s, double bin_width_s) {
  const double bins = std::ceil(duration_s / bin_width_s - 1e-9);
  return bins > 0.0 ? static_cast<std::size_t>(bins) : 0;
}

/// Reward per bin divided by the bin width.
inline ProficiencySeries bin_events(const std::vector<RewardEvent>& events, double duration_s, double bin_width_s) {
  if (!(bin_width_s > 0.0)) throw std::invalid_argument("bin_width_s must be > 0");
  ProficiencySeries series;
  series.bin_width_s = bin_width_s;
  series.values.assign(bin_count(duration_s, bin_width_s), 0.0);
  if (series.values.empty()) return series;
  std::vector<double> sums(series.values.size(), 0.0);
  for (const auto& e : events) {
    if (e.time < 0.0 || e.time >= duration_s) throw std::out_of_range("reward event outside run duration");
    // The nudge keeps events stamped exactly on a bin edge (k * dt == m * w) in the later bin.
    auto k = static_cast<std::size_t>(std::floor(e.time / bin_width_s + 1e-9));
    k = std::min(k, sums.size() - 1);
    sums[k] += e.value;
  }
  for (std::size_t k = 0; k < sums.size(); ++k) series.values[k] = sums[k] / bin_width_s;
  return series;
}

inline ProficiencySeries average_series(const std::vector<ProficiencySeries>& series_list) {
  if (series_list.empty()) throw std::invalid_argument("cannot average an empty series list");
  const auto& first = series_list.front();
  ProficiencySeries out;
  out.bin_width_s = first.bin_width_s;
  out.values.assign(first.values.size(), 0.0);
  for (const auto& s : series_list) {
    if (s.values.size() != first.values.size() || s.bin_width_s != first.bin_width_s) {
      throw std::invalid_argument("series lengths or bin widths differ");
    }
    for (std::size_t k = 0; k < s.values.size(); ++k) out.values[k] += s.values[k];
  }
  const double n = static_cast<double>(series_list.size());
  for (double& v : out.values) v /= n;
  out.n_runs_averaged = static_cast<int>(series_list.size());
  return out;
}

/// First-order Butterworth low-pass coefficients from the bilinear transform.
struct FirstOrderCoefficients {
  double b0 = 0.0;
  double b1 = 0.0;
  double a1 = 0.0;
};

inline FirstOrderCoefficients butterworth_coefficients(double cutoff_normalized) {
  if (!(cutoff_normalized > 0.0 && cutoff_normalized < 0.5)) {
    throw std::invalid_argument("cutoff_normalized must be in (0, 0.5)");
  }
  const double k = std::tan(std::numbers::pi * cutoff_normalized);
  return {k / (1.0 + k), k / (1.0 + k), (k - 1.0) / (k + 1.0)};
}

/// Causal y[n] = b0 x[n] + b1 x[n-1] - a1 y[n-1], with state initialized to
/// x[0] so that a constant input passes through unchanged.
inline ProficiencySeries butterworth_lowpass(const ProficiencySeries& series, const FilterConfig& fc) {
  fc.validate();
  if (series.values.size() < 2) throw std::invalid_argument("filter needs at least two samples");
  const auto c = butterworth_coefficients(fc.cutoff_normalized);
  ProficiencySeries out = series;
  double x_prev = series.values.front();
  double y_prev = series.values.front();
  for (std::size_t n = 0; n < series.values.size(); ++n) {
    const double x = series.values[n];
    const double y = c.b0 * x + c.b1 * x_prev - c.a1 * y_prev;
    out.values[n] = y;
    x_prev = x;
    y_prev = y;
  }
  return out;
}

inline int default_thread_count() {
  if (const char* env = std::getenv("NEORL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, n) on `threads` workers. The first exception wins.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
}

struct ExperimentResult {
  ProficiencySeries averaged;  // before smoothing
  ProficiencySeries filtered;
  std::vector<std::vector<RewardEvent>> run_logs;  // indexed by run
};

inline ExperimentResult run_experiment(const RunConfig& cfg, int threads = default_thread_count()) {
  cfg.validate();
  ExperimentResult result;
  result.run_logs.resize(static_cast<std::size_t>(cfg.n_runs));
  parallel_for(cfg.n_runs, threads, [&](int k) { result.run_logs[static_cast<std::size_t>(k)] = run_single(cfg, k); });

  std::vector<ProficiencySeries> binned;
  binned.reserve(result.run_logs.size());
  for (const auto& log : result.run_logs) binned.push_back(bin_events(log, cfg.duration_s, cfg.bin_width_s));
  result.averaged = average_series(binned);
  result.filtered = result.averaged.values.size() >= 2 ? butterworth_lowpass(result.averaged, cfg.filter)
                                                         : result.averaged;
  return result;
}

/// Mean of the series over bins whose start time is >= from_s.
inline double mean_after(const ProficiencySeries& s, double from_s) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (static_cast<double>(k) * s.bin_width_s + 1e-9 >= from_s) {
      sum += s.values[k];
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

// CSV output. Doubles are written with 17 significant digits so files are
// reproducible and lossless.

inline void write_aggregate_csv(std::ostream& out, const ProficiencySeries& s) {
  out << "time_s,proficiency_r_per_s,n_runs\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    out << static_cast<double>(k) * s.bin_width_s << ',' << s.values[k] << ',' << s.n_runs_averaged << '\n';
  }
}

inline void write_raw_csv(std::ostream& out, const std::vector<std::vector<RewardEvent>>& logs) {
  out << "run_idx,time_s,reward\n";
  out << std::setprecision(17);
  for (std::size_t r = 0; r < logs.size(); ++r) {
    for (const auto& e : logs[r]) out << r << ',' << e.time << ',' << e.value << '\n';
  }
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace neorl
