#pragma once

// Banks of tabular general value functions over one NRES layer. Learner d of
// a bank predicts reaching cell d: cumulant 1 and termination on entering d.
// All N^2 learners share one behavior stream and learn off-policy from it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "neorl/geometry.hpp"
#include "neorl/waterworld.hpp"

namespace neorl {

struct LearnerParams {
  double alpha = 0.25;
  double gamma = 0.95;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0, 1)");
  }
};

using ActionValues = std::array<double, kActionCount>;

/// Dense table q[state cell][target cell][action] for one layer.
class LearnerBank {
 public:
  LearnerBank(std::string map_id, int resolution, LearnerParams params = {})
      : map_id_(std::move(map_id)), resolution_(resolution), params_(params) {
    if (resolution < 2) throw std::invalid_argument("bank resolution must be >= 2");
    params_.validate();
    n_cells_ = resolution * resolution;
    q_.assign(static_cast<std::size_t>(n_cells_) * n_cells_ * kActionCount, 0.0);
  }

  const std::string& map_id() const { return map_id_; }
  int resolution() const { return resolution_; }
  int n_cells() const { return n_cells_; }
  double alpha() const { return params_.alpha; }
  double gamma() const { return params_.gamma; }
  const LearnerParams& params() const { return params_; }

  std::size_t offset(int s, int d, int a = 0) const {
    return (static_cast<std::size_t>(s) * n_cells_ + static_cast<std::size_t>(d)) * kActionCount +
           static_cast<std::size_t>(a);
  }

  double q(int s, int d, int a) const { return q_[offset(s, d, a)]; }
  double& q(int s, int d, int a) { return q_[offset(s, d, a)]; }

  /// Row of N^2 * 4 values for one state cell.
  const double* row(int s) const { return q_.data() + offset(s, 0); }
  double* row(int s) { return q_.data() + offset(s, 0); }

  const std::vector<double>& table() const { return q_; }
  std::vector<double>& table() { return q_; }

 private:
  std::string map_id_;
  int resolution_;
  int n_cells_;
  LearnerParams params_;
  std::vector<double> q_;
};

/// A change of cell within one experience stream.
struct Transition {
  int stream_id = 0;
  CellIndex s;
  Action a = Action::N;
  CellIndex s_next;
};

/// Last cell seen on one stream (the agent, or one object's relative vector).
struct StreamTracker {
  int stream_id = 0;
  std::optional<CellIndex> last_cell;
  std::optional<Action> last_action;
};

/// One off-policy backup of every learner in the bank from a shared transition.
inline void update(LearnerBank& bank, const Transition& t) {
  if (t.s.flat == t.s_next.flat) throw std::invalid_argument("effect-driven update requires a cell change");
  const int n = bank.n_cells();
  const double alpha = bank.alpha();
  const double gamma = bank.gamma();
  const int a = index_of(t.a);
  const double* next = bank.row(t.s_next.flat);
  double* cur = bank.row(t.s.flat);
  for (int d = 0; d < n; ++d) {
    const double* nq = next + static_cast<std::ptrdiff_t>(d) * kActionCount;
    double target;
    if (d == t.s_next.flat) {
      target = 1.0;
    } else {
      target = gamma * std::max(std::max(nq[0], nq[1]), std::max(nq[2], nq[3]));
    }
    double& v = cur[static_cast<std::ptrdiff_t>(d) * kActionCount + a];
    v += alpha * (target - v);
  }
}

using UpdateRule = void (*)(LearnerBank&, const Transition&);

/// Feeds one tick of a stream. Emits (and applies) a transition only when the
/// cell changed since the previous tick.
inline std::optional<Transition> observe(StreamTracker& tracker, LearnerBank& bank, const CellIndex& current_cell,
                                         Action action_in_effect, UpdateRule rule = &update) {
  std::optional<Transition> emitted;
  if (tracker.last_cell && tracker.last_cell->flat != current_cell.flat) {
    emitted = Transition{tracker.stream_id, *tracker.last_cell, action_in_effect, current_cell};
    rule(bank, *emitted);
  }
  tracker.last_cell = current_cell;
  tracker.last_action = action_in_effect;
  return emitted;
}

inline void reset_stream(StreamTracker& tracker) {
  tracker.last_cell.reset();
  tracker.last_action.reset();
}

inline ActionValues greedy_values(const LearnerBank& bank, const CellIndex& s, const CellIndex& d) {
  if (s.flat < 0 || s.flat >= bank.n_cells() || d.flat < 0 || d.flat >= bank.n_cells()) {
    throw std::out_of_range("cell index outside bank");
  }
  const double* v = bank.row(s.flat) + static_cast<std::ptrdiff_t>(d.flat) * kActionCount;
  return {v[0], v[1], v[2], v[3]};
}

// Snapshot layout (native little-endian):
//   char[8] "NEORLQT1" | u32 version | u32 id_len | id bytes | u32 N | f64 alpha | f64 gamma
//   | f64 q[N^2][N^2][4] row-major
inline constexpr std::uint32_t kSnapshotVersion = 1;

inline void save_snapshot(const LearnerBank& bank, std::ostream& out) {
  auto put = [&out](const auto& v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
  out.write("NEORLQT1", 8);
  put(kSnapshotVersion);
  put(static_cast<std::uint32_t>(bank.map_id().size()));
  out.write(bank.map_id().data(), static_cast<std::streamsize>(bank.map_id().size()));
  put(static_cast<std::uint32_t>(bank.resolution()));
  put(bank.alpha());
  put(bank.gamma());
  out.write(reinterpret_cast<const char*>(bank.table().data()),
            static_cast<std::streamsize>(bank.table().size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed to write q-table snapshot");
}

inline LearnerBank load_snapshot(std::istream& in) {
  auto get = [&in](auto& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw std::runtime_error("truncated q-table snapshot");
  };
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "NEORLQT1", 8) != 0) throw std::runtime_error("not a q-table snapshot");
  std::uint32_t version = 0, id_len = 0, n = 0;
  get(version);
  if (version != kSnapshotVersion) throw std::runtime_error("unsupported snapshot version");
  get(id_len);
  std::string id(id_len, '\0');
  in.read(id.data(), id_len);
  get(n);
  LearnerParams params;
  get(params.alpha);
  get(params.gamma);
  LearnerBank bank(id, static_cast<int>(n), params);
  in.read(reinterpret_cast<char*>(bank.table().data()),
          static_cast<std::streamsize>(bank.table().size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated q-table snapshot");
  return bank;
}

}  // namespace neorl
