#pragma once

// Built-in self checks: learner banks against value iteration on a small grid
// MDP, the one-hot partition, and the smoothing filter coefficients.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "neorl/geometry.hpp"
#include "neorl/gvf_bank.hpp"
#include "neorl/harness.hpp"
#include "neorl/random.hpp"

namespace neorl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Deterministic n x n grid: actions move one cell, bumping a wall stays put.
inline int grid_next(int s, Action a, int n) {
  int row = s / n, col = s % n;
  switch (a) {
    case Action::N: row = std::min(row + 1, n - 1); break;
    case Action::S: row = std::max(row - 1, 0); break;
    case Action::E: col = std::min(col + 1, n - 1); break;
    case Action::W: col = std::max(col - 1, 0); break;
  }
  return row * n + col;
}

/// q*[s][d][a] by value iteration. Wall bumps never change the cell, so they
/// are never experienced and stay at zero.
inline std::vector<double> grid_value_iteration(int n, double gamma, double tol = 1e-14) {
  const int cells = n * n;
  auto at = [cells](int s, int d, int a) {
    return (static_cast<std::size_t>(s) * cells + d) * kActionCount + static_cast<std::size_t>(a);
  };
  std::vector<double> q(static_cast<std::size_t>(cells) * cells * kActionCount, 0.0);
  for (int iter = 0; iter < 100000; ++iter) {
    double delta = 0.0;
    for (int s = 0; s < cells; ++s) {
      for (int d = 0; d < cells; ++d) {
        for (int a = 0; a < kActionCount; ++a) {
          const int next = grid_next(s, action_from_index(a), n);
          if (next == s) continue;
          double v = 1.0;
          if (next != d) {
            double best = 0.0;
            for (int b = 0; b < kActionCount; ++b) best = std::max(best, q[at(next, d, b)]);
            v = gamma * best;
          }
          delta = std::max(delta, std::abs(v - q[at(s, d, a)]));
          q[at(s, d, a)] = v;
        }
      }
    }
    if (delta < tol) break;
  }
  return q;
}

/// Trains a bank by sweeping every cell-changing (s, a) pair until the
/// largest change in one sweep drops below `tol`. Returns the sweep count.
inline int train_on_grid(LearnerBank& bank, UpdateRule rule = &update, double tol = 1e-9, int max_sweeps = 200000) {
  const int n = bank.resolution();
  const int cells = n * n;
  std::vector<double> before;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    before = bank.table();
    for (int s = 0; s < cells; ++s) {
      for (Action a : kActions) {
        const int next = grid_next(s, a, n);
        if (next == s) continue;
        rule(bank, {0, CellIndex::from_flat(s, n), a, CellIndex::from_flat(next, n)});
      }
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i) delta = std::max(delta, std::abs(bank.table()[i] - before[i]));
    if (delta < tol) return sweep;
  }
  return max_sweeps;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace detail

inline CheckResult check_oracle_equivalence(UpdateRule rule = &update, int n = 5, double gamma = 0.95) {
  const auto t0 = std::chrono::steady_clock::now();
  LearnerBank bank("grid", n, {0.25, gamma});
  train_on_grid(bank, rule);
  const auto oracle = grid_value_iteration(n, gamma);
  double err = 0.0;
  for (std::size_t i = 0; i < oracle.size(); ++i) err = std::max(err, std::abs(bank.table()[i] - oracle[i]));
  CheckResult r{"oracle", err <= 1e-6, "max |q - q*| = " + detail::fmt("%.3g", err), 0.0};
  r.seconds = detail::seconds_since(t0);
  return r;
}

/// Counts containing cells per axis from the receptive-field definition and
/// compares against cell_index at sub-cell spacing, edges included.
inline CheckResult check_encoding_partition(const std::vector<int>& resolutions = {2, 3, 5, 7, 11, 13, 20, 40},
                                            int samples_per_cell = 8) {
  const auto t0 = std::chrono::steady_clock::now();
  long long points = 0, failures = 0;
  for (Modality m : {Modality::PC, Modality::OVC}) {
    for (int n : resolutions) {
      const NresMap map(n, m);
      const Bounds& b = map.bounds();
      const int steps = n * samples_per_cell;
      std::vector<double> xs, ys;
      for (int i = 0; i <= steps; ++i) {
        xs.push_back(b.min.x + b.width() * i / steps);
        ys.push_back(b.min.y + b.height() * i / steps);
        if (i < steps) {
          xs.push_back(b.min.x + b.width() * (i + 0.5) / steps);
          ys.push_back(b.min.y + b.height() * (i + 0.5) / steps);
        }
      }
      auto owner = [n](double v, auto edge) {
        int count = 0, which = -1;
        for (int k = 0; k < n; ++k) {
          const bool in = v >= edge(k) && (v < edge(k + 1) || (k == n - 1 && v == edge(n)));
          if (in) {
            ++count;
            which = k;
          }
        }
        return count == 1 ? which : -1;
      };
      for (double y : ys) {
        const int row = owner(y, [&](int k) { return map.y_edge(k); });
        for (double x : xs) {
          const int col = owner(x, [&](int k) { return map.x_edge(k); });
          ++points;
          const CellIndex c = cell_index({x, y}, map);
          if (row < 0 || col < 0 || c.row != row || c.col != col || c.flat != row * n + col) ++failures;
        }
      }
    }
  }
  Rng rng(0x5eedULL);
  for (int i = 0; i < 10000; ++i) {
    const Vec2 a{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
    const Vec2 b{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
    if (!(ovc_vector(a, b) == -ovc_vector(b, a)) || !(ovc_vector(a, a) == Vec2{0.0, 0.0})) ++failures;
  }
  CheckResult r{"partition", failures == 0,
                std::to_string(points) + " points, " + std::to_string(failures) + " failures", 0.0};
  r.seconds = detail::seconds_since(t0);
  return r;
}

/// Coefficients against the analog prototype wa / (s + wa) mapped through
/// s = 2 (1 - z^-1) / (1 + z^-1) with prewarping, plus DC gain on a constant.
inline CheckResult check_filter() {
  const auto t0 = std::chrono::steady_clock::now();
  double coef_err = 0.0, dc_err = 0.0;
  for (double fc : {0.001, 0.01, 0.05, 0.1, 0.25, 0.4}) {
    const double wa = 2.0 * std::tan(std::numbers::pi * fc);
    const double b = wa / (2.0 + wa);
    const double a1 = (wa - 2.0) / (wa + 2.0);
    const auto c = butterworth_coefficients(fc);
    coef_err = std::max({coef_err, std::abs(c.b0 - b), std::abs(c.b1 - b), std::abs(c.a1 - a1)});
    ProficiencySeries s;
    s.values.assign(500, 0.37);
    const auto y = butterworth_lowpass(s, {1, fc});
    for (double v : y.values) dc_err = std::max(dc_err, std::abs(v - 0.37));
  }
  const bool ok = coef_err <= 1e-12 && dc_err <= 1e-9;
  CheckResult r{"filter", ok, "coef err " + detail::fmt("%.3g", coef_err) + ", dc err " + detail::fmt("%.3g", dc_err),
                0.0};
  r.seconds = detail::seconds_since(t0);
  return r;
}

/// Deliberately wrong rule (halves the terminal backup) used to show the
/// oracle check can fail.
inline void corrupted_update(LearnerBank& bank, const Transition& t) {
  update(bank, t);
  bank.q(t.s.flat, t.s_next.flat, index_of(t.a)) *= 0.5;
}

inline std::vector<CheckResult> run_selfchecks(UpdateRule rule = &update) {
  return {check_oracle_equivalence(rule), check_encoding_partition(), check_filter()};
}

inline bool report(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " (" << detail::fmt("%.2f", r.seconds)
        << " s)\n";
    all = all && r.passed;
  }
  return all;
}

}  // namespace neorl
