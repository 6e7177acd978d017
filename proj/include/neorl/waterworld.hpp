#pragma once

// Allocentric WaterWorld: an inertial agent in the unit square chasing
// drifting green (+1) and red (-1) objects. Deterministic given the seed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neorl/geometry.hpp"
#include "neorl/random.hpp"

namespace neorl {

enum class Action : int { N = 0, S = 1, E = 2, W = 3 };

inline constexpr int kActionCount = 4;
inline constexpr std::array<Action, kActionCount> kActions = {Action::N, Action::S, Action::E, Action::W};

inline constexpr int index_of(Action a) { return static_cast<int>(a); }
inline constexpr Action action_from_index(int i) { return static_cast<Action>(i); }

inline constexpr Vec2 direction(Action a) {
  switch (a) {
    case Action::N: return {0.0, 1.0};
    case Action::S: return {0.0, -1.0};
    case Action::E: return {1.0, 0.0};
    case Action::W: return {-1.0, 0.0};
  }
  return {};
}

inline const char* to_string(Action a) {
  constexpr std::array<const char*, kActionCount> names = {"N", "S", "E", "W"};
  return names[index_of(a)];
}

struct EnvConfig {
  double dt = 1.0 / 30.0;      // s per tick
  double thrust = 7.5;         // units/s^2
  double damping = 0.975;      // velocity factor per tick
  double agent_radius = 0.025;
  double object_radius = 0.025;
  int object_count = 3;
  double speed_min = 0.2;      // units/s
  double speed_max = 0.3;
  double spawn_min_dist = 0.1;
  double green_probability = 0.5;  // chance a spawned object has valence +1
  bool board_reset = true;         // respawn every object once no green remains
  std::uint64_t seed = 0;

  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid env config: " + what); };
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be > 0");
    if (!(thrust >= 0.0) || !std::isfinite(thrust)) fail("thrust must be >= 0");
    if (!(damping > 0.0 && damping <= 1.0)) fail("damping must be in (0, 1]");
    if (!(agent_radius > 0.0 && agent_radius < 0.5)) fail("agent_radius must be in (0, 0.5)");
    if (!(object_radius > 0.0 && object_radius < 0.5)) fail("object_radius must be in (0, 0.5)");
    if (object_count < 1) fail("object_count must be >= 1");
    if (!(speed_min >= 0.0) || !(speed_min <= speed_max) || !std::isfinite(speed_max)) {
      fail("speed range must satisfy 0 <= speed_min <= speed_max");
    }
    if (!(spawn_min_dist >= 0.0) || !std::isfinite(spawn_min_dist)) fail("spawn_min_dist must be >= 0");
    if (!(green_probability >= 0.0 && green_probability <= 1.0)) fail("green_probability must be in [0, 1]");
    if (board_reset && green_probability == 0.0) fail("board_reset needs green_probability > 0");
  }

  bool operator==(const EnvConfig&) const = default;
};

struct AgentBody {
  Vec2 pos;
  Vec2 vel;
  double radius = 0.0;
};

struct FloatObject {
  int id = 0;
  Vec2 pos;
  Vec2 vel;
  double radius = 0.0;
  double valence = 1.0;
};

struct RewardEvent {
  double time = 0.0;  // s since run start
  double value = 0.0;

  bool operator==(const RewardEvent&) const = default;
};

struct ObservedObject {
  int id = 0;
  Vec2 pos;
  double valence = 0.0;

  bool operator==(const ObservedObject&) const = default;
};

struct Observation {
  Vec2 agent_pos;
  std::vector<ObservedObject> objects;

  bool operator==(const Observation&) const = default;
};

struct StepResult {
  Observation observation;
  std::vector<RewardEvent> events;
};

class Env {
 public:
  explicit Env(const EnvConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    agent_.pos = {0.5, 0.5};
    agent_.vel = {0.0, 0.0};
    agent_.radius = cfg_.agent_radius;
    objects_.reserve(static_cast<std::size_t>(cfg_.object_count));
    for (int i = 0; i < cfg_.object_count; ++i) objects_.push_back(spawn_object());
  }

  const EnvConfig& config() const { return cfg_; }
  const AgentBody& agent() const { return agent_; }
  const std::vector<FloatObject>& objects() const { return objects_; }
  double time() const { return static_cast<double>(ticks_) * cfg_.dt; }
  std::int64_t ticks() const { return ticks_; }
  double score() const { return score_; }

  Observation observation() const {
    Observation obs;
    obs.agent_pos = agent_.pos;
    obs.objects.reserve(objects_.size());
    for (const auto& o : objects_) obs.objects.push_back({o.id, o.pos, o.valence});
    return obs;
  }

  /// Draws a fresh object: random valence, position, heading and speed.
  FloatObject spawn_object() {
    FloatObject o;
    o.id = next_id_++;
    o.radius = cfg_.object_radius;
    o.valence = bernoulli(rng_, cfg_.green_probability) ? 1.0 : -1.0;
    const double lo = cfg_.object_radius;
    const double hi = 1.0 - cfg_.object_radius;
    constexpr int kMaxAttempts = 1000;
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxAttempts) throw std::runtime_error("arena too crowded");
      o.pos = {uniform(rng_, lo, hi), uniform(rng_, lo, hi)};
      if (distance(o.pos, agent_.pos) >= cfg_.spawn_min_dist) break;
    }
    const double heading = uniform_angle(rng_);
    const double speed = uniform(rng_, cfg_.speed_min, cfg_.speed_max);
    o.vel = {speed * std::cos(heading), speed * std::sin(heading)};
    return o;
  }

  /// Advances the world by one tick under action `a`.
  StepResult step(Action a) {
    StepResult out;
    step_into(a, out.events);
    out.observation = observation();
    return out;
  }

  /// step() without building an Observation; events are appended to `events`.
  void step_into(Action a, std::vector<RewardEvent>& events) {
    const double dt = cfg_.dt;
    const double event_time = time();

    agent_.vel = (agent_.vel + direction(a) * (cfg_.thrust * dt)) * cfg_.damping;
    agent_.pos = agent_.pos + agent_.vel * dt;
    clamp_agent();

    for (auto& o : objects_) {
      o.pos = o.pos + o.vel * dt;
      reflect(o);
    }

    const double contact = cfg_.agent_radius + cfg_.object_radius;
    bool hit = false;
    for (auto& o : objects_) {
      if (distance(agent_.pos, o.pos) < contact) {
        events.push_back({event_time, o.valence});
        score_ += o.valence;
        o = spawn_object();
        hit = true;
      }
    }
    if (hit && cfg_.board_reset && no_green_left()) {
      for (auto& o : objects_) o = spawn_object();
      ++board_resets_;
    }
    ++ticks_;
  }

  int board_resets() const { return board_resets_; }

  // Test access.
  AgentBody& mutable_agent() { return agent_; }
  std::vector<FloatObject>& mutable_objects() { return objects_; }

 private:
  void clamp_agent() {
    const double lo = agent_.radius;
    const double hi = 1.0 - agent_.radius;
    if (agent_.pos.x < lo) { agent_.pos.x = lo; agent_.vel.x = 0.0; }
    if (agent_.pos.x > hi) { agent_.pos.x = hi; agent_.vel.x = 0.0; }
    if (agent_.pos.y < lo) { agent_.pos.y = lo; agent_.vel.y = 0.0; }
    if (agent_.pos.y > hi) { agent_.pos.y = hi; agent_.vel.y = 0.0; }
  }

  static void reflect_axis(double& p, double& v, double lo, double hi) {
    if (p < lo) {
      p = std::min(2.0 * lo - p, hi);
      v = -v;
    } else if (p > hi) {
      p = std::max(2.0 * hi - p, lo);
      v = -v;
    }
  }

  void reflect(FloatObject& o) const {
    const double lo = o.radius;
    const double hi = 1.0 - o.radius;
    reflect_axis(o.pos.x, o.vel.x, lo, hi);
    reflect_axis(o.pos.y, o.vel.y, lo, hi);
  }

  bool no_green_left() const {
    return std::none_of(objects_.begin(), objects_.end(), [](const FloatObject& o) { return o.valence > 0.0; });
  }

  EnvConfig cfg_;
  Rng rng_;
  AgentBody agent_;
  std::vector<FloatObject> objects_;
  std::int64_t ticks_ = 0;
  int next_id_ = 0;
  double score_ = 0.0;
  int board_resets_ = 0;
};

/// Mean seconds between reward events for a uniformly random actor.
inline double random_policy_calibration(const EnvConfig& cfg, double duration_s) {
  if (!(duration_s >= 600.0)) throw std::invalid_argument("calibration needs duration_s >= 600");
  Env env(cfg);
  Rng policy_rng(mix_seed(cfg.seed ^ 0xC0FFEEULL));
  const auto ticks = static_cast<std::int64_t>(std::llround(duration_s / cfg.dt));
  std::vector<RewardEvent> events;
  for (std::int64_t t = 0; t < ticks; ++t) {
    env.step_into(action_from_index(uniform_index(policy_rng, kActionCount)), events);
  }
  if (events.empty()) throw std::runtime_error("no encounters; check constants");
  return static_cast<double>(ticks) * cfg.dt / static_cast<double>(events.size());
}

}  // namespace neorl
