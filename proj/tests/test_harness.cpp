#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "neorl/harness.hpp"

using namespace neorl;

namespace {

RunConfig control_run(double duration_s, int runs) {
  RunConfig c;
  c.agent.control = true;
  c.agent.epsilon = 1.0;
  c.duration_s = duration_s;
  c.n_runs = runs;
  c.base_seed = 42;
  return c;
}

RunConfig learner_run(double duration_s, int runs) {
  RunConfig c;
  c.agent.modalities = {Modality::PC, Modality::OVC};
  c.agent.resolutions = {2, 3, 5};
  c.duration_s = duration_s;
  c.n_runs = runs;
  c.base_seed = 5;
  return c;
}

ProficiencySeries series_of(std::vector<double> v, double w = 0.2) {
  ProficiencySeries s;
  s.bin_width_s = w;
  s.values = std::move(v);
  return s;
}

}  // namespace

TEST(RunSingle, ControlProducesBalancedEvents) {
  auto cfg = control_run(60.0, 20);
  cfg.env.board_reset = false;
  double net = 0.0;
  std::size_t count = 0;
  for (int k = 0; k < cfg.n_runs; ++k) {
    const auto log = run_single(cfg, k);
    for (const auto& e : log) net += e.value;
    count += log.size();
  }
  EXPECT_GT(count, 50u);
  EXPECT_LT(std::abs(net) / static_cast<double>(count), 0.25);
}

TEST(RunSingle, ZeroDurationAndDeterminism) {
  EXPECT_TRUE(run_single(learner_run(0.0, 1), 0).empty());
  const auto cfg = learner_run(30.0, 1);
  EXPECT_EQ(run_single(cfg, 3), run_single(cfg, 3));
  EXPECT_NE(run_single(cfg, 3), run_single(cfg, 4));
}

TEST(RunSingle, SeedsAreBaseXorIndex) {
  EXPECT_EQ(run_seed(0b1010, 0b0110), 0b1100u);
  EXPECT_EQ(tick_count(1200.0, 1.0 / 30.0), 36000);
}

TEST(BinEvents, Examples) {
  const auto empty = bin_events({}, 1.0, 0.2);
  EXPECT_EQ(empty.values, std::vector<double>(5, 0.0));
  const auto one = bin_events({{0.3, 1.0}}, 1.0, 0.2);
  ASSERT_EQ(one.values.size(), 5u);
  EXPECT_DOUBLE_EQ(one.values[1], 5.0);
  EXPECT_EQ(one.values[0] + one.values[2] + one.values[3] + one.values[4], 0.0);
  EXPECT_EQ(bin_events({}, 1.1, 0.2).values.size(), 6u);
  EXPECT_THROW(bin_events({{1.0, 1.0}}, 1.0, 0.2), std::out_of_range);
}

TEST(BinEvents, TickAlignedEdgesGoToTheLaterBin) {
  // 6 ticks of 1/30 s is exactly one 0.2 s bin.
  const double t = 6.0 * (1.0 / 30.0);
  const auto s = bin_events({{t, 1.0}}, 1.0, 0.2);
  EXPECT_EQ(s.values[1], 5.0);
}

TEST(BinEvents, ConservationOnRandomLogs) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const double duration = uniform(rng, 1.0, 100.0);
    std::vector<RewardEvent> log;
    double sum = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double v = bernoulli(rng, 0.5) ? 1.0 : -1.0;
      log.push_back({uniform(rng, 0.0, duration), v});
      sum += v;
    }
    const auto s = bin_events(log, duration, 0.2);
    double back = 0.0;
    for (double v : s.values) back += v * 0.2;
    EXPECT_NEAR(back, sum, 1e-9);
  }
}

TEST(Average, Examples) {
  const auto a = series_of({0.0, 2.0});
  const auto b = series_of({2.0, 0.0});
  const auto m = average_series({a, b});
  EXPECT_EQ(m.values, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(m.n_runs_averaged, 2);
  EXPECT_EQ(average_series({a, a, a}).values, a.values);
  EXPECT_THROW(average_series({a, series_of({1.0})}), std::invalid_argument);
  EXPECT_THROW(average_series({}), std::invalid_argument);
}

TEST(Average, MatchesIndependentSummation) {
  Rng rng(2);
  std::vector<ProficiencySeries> list;
  for (int k = 0; k < 7; ++k) {
    std::vector<double> v(50);
    for (double& x : v) x = uniform(rng, -5.0, 5.0);
    list.push_back(series_of(v));
  }
  const auto m = average_series(list);
  for (std::size_t i = 0; i < 50; ++i) {
    long double acc = 0.0L;
    for (const auto& s : list) acc += s.values[i];
    EXPECT_NEAR(m.values[i], static_cast<double>(acc / 7.0L), 1e-12);
  }
  std::reverse(list.begin(), list.end());
  const auto r = average_series(list);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_NEAR(r.values[i], m.values[i], 1e-12);
}

TEST(Filter, CoefficientsMatchPrewarpedAnalogPrototype) {
  for (double fc : {0.002, 0.01, 0.1, 0.3}) {
    // H(s) = wc / (s + wc) with wc = 2 tan(pi fc), s = 2 (z - 1) / (z + 1).
    const double wc = 2.0 * std::tan(M_PI * fc);
    const auto c = butterworth_coefficients(fc);
    EXPECT_NEAR(c.b0, wc / (wc + 2.0), 1e-12);
    EXPECT_NEAR(c.b1, wc / (wc + 2.0), 1e-12);
    EXPECT_NEAR(c.a1, (wc - 2.0) / (wc + 2.0), 1e-12);
    EXPECT_NEAR((c.b0 + c.b1) / (1.0 + c.a1), 1.0, 1e-12);
  }
  EXPECT_THROW(butterworth_coefficients(0.0), std::invalid_argument);
  EXPECT_THROW(butterworth_coefficients(0.5), std::invalid_argument);
}

TEST(Filter, ConstantPassesThrough) {
  const auto y = butterworth_lowpass(series_of(std::vector<double>(300, 0.42)), {});
  for (double v : y.values) EXPECT_NEAR(v, 0.42, 1e-9);
}

TEST(Filter, UnitStepRisesMonotonically) {
  const double fc = 0.01;
  std::vector<double> x(2000, 1.0);
  x[0] = 0.0;
  const auto y = butterworth_lowpass(series_of(x), {1, fc});
  for (std::size_t n = 1; n < y.values.size(); ++n) EXPECT_GE(y.values[n], y.values[n - 1]);
  EXPECT_NEAR(y.values[static_cast<std::size_t>(10.0 / fc)], 1.0, 1e-6);
}

TEST(Filter, ImpulseTailIsGeometric) {
  const double fc = 0.05;
  std::vector<double> x(60, 0.0);
  x[1] = 1.0;
  const auto y = butterworth_lowpass(series_of(x), {1, fc});
  const auto c = butterworth_coefficients(fc);
  EXPECT_EQ(y.values[0], 0.0);
  EXPECT_NEAR(y.values[1], c.b0, 1e-12);
  EXPECT_NEAR(y.values[2], c.b1 - c.a1 * c.b0, 1e-12);
  for (std::size_t n = 3; n < 40; ++n) EXPECT_NEAR(y.values[n] / y.values[n - 1], -c.a1, 1e-12);
}

TEST(Filter, Linearity) {
  Rng rng(3);
  std::vector<double> a(400), b(400), mix(400);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = uniform(rng, -1, 1);
    b[i] = uniform(rng, 0, 5);
    mix[i] = 2.0 * a[i] - 0.5 * b[i];
  }
  const auto fa = butterworth_lowpass(series_of(a), {});
  const auto fb = butterworth_lowpass(series_of(b), {});
  const auto fm = butterworth_lowpass(series_of(mix), {});
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(fm.values[i], 2.0 * fa.values[i] - 0.5 * fb.values[i], 1e-9);
}

TEST(Filter, Errors) {
  EXPECT_THROW(butterworth_lowpass(series_of({1.0}), {}), std::invalid_argument);
  EXPECT_THROW(butterworth_lowpass(series_of({1.0, 2.0}), {2, 0.01}), std::invalid_argument);
  EXPECT_THROW(butterworth_lowpass(series_of({1.0, 2.0}), {1, 0.7}), std::invalid_argument);
}

TEST(Experiment, SingleRunIsComposition) {
  const auto cfg = learner_run(20.0, 1);
  const auto r = run_experiment(cfg, 1);
  const auto manual = butterworth_lowpass(bin_events(run_single(cfg, 0), cfg.duration_s, cfg.bin_width_s), cfg.filter);
  EXPECT_EQ(r.filtered.values, manual.values);
  EXPECT_EQ(r.filtered.n_runs_averaged, 1);
}

TEST(Experiment, RunIsolationAndThreadIndependence) {
  const auto cfg = learner_run(20.0, 6);
  const auto serial = run_experiment(cfg, 1);
  const auto threaded = run_experiment(cfg, 4);
  EXPECT_EQ(serial.run_logs, threaded.run_logs);
  EXPECT_EQ(serial.filtered, threaded.filtered);
  for (int k = 0; k < cfg.n_runs; ++k) EXPECT_EQ(run_single(cfg, k), serial.run_logs[k]);
}

TEST(Experiment, AveragingShrinksVariance) {
  const auto cfg = control_run(120.0, 64);
  const auto r = run_experiment(cfg, 4);
  std::vector<ProficiencySeries> singles;
  for (const auto& log : r.run_logs) singles.push_back(bin_events(log, cfg.duration_s, cfg.bin_width_s));
  auto group_variance = [&](int k) {
    std::vector<ProficiencySeries> groups;
    for (std::size_t g = 0; g + k <= singles.size(); g += k) {
      groups.push_back(average_series({singles.begin() + g, singles.begin() + g + k}));
    }
    double total = 0.0;
    const std::size_t bins = groups[0].values.size();
    for (std::size_t i = 0; i < bins; ++i) {
      double mean = 0.0, sq = 0.0;
      for (const auto& s : groups) mean += s.values[i];
      mean /= groups.size();
      for (const auto& s : groups) sq += (s.values[i] - mean) * (s.values[i] - mean);
      total += sq / (groups.size() - 1);
    }
    return total / bins;
  };
  const double ratio = group_variance(4) / group_variance(1);
  EXPECT_GT(ratio, 0.12);
  EXPECT_LT(ratio, 0.45);
}

TEST(Experiment, InvalidConfig) {
  auto cfg = learner_run(10.0, 0);
  EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
  cfg = learner_run(10.0, 1);
  cfg.bin_width_s = 0.0;
  EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3, [](int i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  std::vector<int> hit(100, 0);
  parallel_for(100, 8, [&](int i) { hit[i] += 1; });
  EXPECT_EQ(std::accumulate(hit.begin(), hit.end(), 0), 100);
}

TEST(Csv, AggregateLayout) {
  auto s = series_of({0.1, 1.0 / 3.0, 0.0});
  s.n_runs_averaged = 20;
  std::ostringstream out;
  write_aggregate_csv(out, s);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "time_s,proficiency_r_per_s,n_runs");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.10000000000000001,20");
  std::getline(in, line);
  EXPECT_EQ(line, "0.20000000000000001,0.33333333333333331,20");
  std::getline(in, line);
  EXPECT_EQ(line.substr(line.rfind(',')), ",20");
  EXPECT_FALSE(std::getline(in, line));
}

TEST(Csv, RawLayout) {
  std::ostringstream out;
  write_raw_csv(out, {{{0.5, 1.0}}, {}, {{1.0, -1.0}, {2.0, 1.0}}});
  EXPECT_EQ(out.str(), "run_idx,time_s,reward\n0,0.5,1\n2,1,-1\n2,2,1\n");
}

TEST(MeanAfter, UsesBinStartTimes) {
  const auto s = series_of({1.0, 2.0, 3.0, 4.0}, 1.0);
  EXPECT_DOUBLE_EQ(mean_after(s, 2.0), 3.5);
  EXPECT_DOUBLE_EQ(mean_after(s, 0.0), 2.5);
  EXPECT_EQ(mean_after(s, 10.0), 0.0);
}
