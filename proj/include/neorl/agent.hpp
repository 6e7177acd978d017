#pragma once

// A complete neoRL agent: learner banks for every layer plus the stream
// trackers feeding them. PC layers learn from the agent's own cell stream;
// OVC layers learn from one stream per object slot.

#include <algorithm>
#include <optional>
#include <vector>

#include "neorl/behavior.hpp"
#include "neorl/gvf_bank.hpp"

namespace neorl {

class NeoRLAgent {
 public:
  NeoRLAgent(const AgentSpec& spec, int object_count, std::uint64_t policy_seed)
      : spec_(spec), stacks_(spec.stacks()), rng_(policy_seed) {
    spec_.validate();
    if (spec_.control) return;
    banks_ = BankSet(stacks_, spec_.learner);
    for (const auto& stack : stacks_) {
      for (const auto& layer : stack.layers()) {
        LayerStreams ls;
        ls.ref = {layer.modality(), layer.resolution()};
        ls.layer = &layer;
        const int streams = layer.modality() == Modality::PC ? 1 : object_count;
        for (int i = 0; i < streams; ++i) ls.trackers.push_back({i, {}, {}});
        layers_.push_back(std::move(ls));
      }
    }
    for (auto& ls : layers_) ls.bank = &banks_.at(ls.ref);
  }

  NeoRLAgent(const NeoRLAgent&) = delete;
  NeoRLAgent& operator=(const NeoRLAgent&) = delete;

  Action act(const Observation& obs) {
    if (spec_.control) return action_from_index(uniform_index(rng_, kActionCount));
    desires_.clear();
    derive_desires_into(obs, stacks_, desires_);
    held_ = select_persistent(composite_q(desires_, banks_));
    return *held_;
  }

  /// Feeds the post-step observation to every stream. `respawned[i]` marks
  /// object slots replaced during the step; their OVC streams restart.
  void learn(const Observation& obs, Action action_in_effect, const std::vector<bool>& respawned) {
    if (spec_.control) return;
    for (auto& ls : layers_) {
      const NresMap& layer = *ls.layer;
      const Bounds& b = layer.bounds();
      if (layer.modality() == Modality::PC) {
        transitions_ += observe(ls.trackers[0], *ls.bank, cell_index(clamp_to_bounds(obs.agent_pos, b), layer),
                                action_in_effect)
                            .has_value();
      } else {
        for (std::size_t i = 0; i < obs.objects.size(); ++i) {
          if (i < respawned.size() && respawned[i]) reset_stream(ls.trackers[i]);
          const Vec2 rel = clamp_to_bounds(ovc_vector(obs.objects[i].pos, obs.agent_pos), b);
          transitions_ += observe(ls.trackers[i], *ls.bank, cell_index(rel, layer), action_in_effect).has_value();
        }
      }
    }
  }

  const BankSet& banks() const { return banks_; }
  const AgentSpec& spec() const { return spec_; }
  long long transitions() const { return transitions_; }

 private:
  struct LayerStreams {
    LayerRef ref;
    const NresMap* layer = nullptr;
    LearnerBank* bank = nullptr;
    std::vector<StreamTracker> trackers;
  };

  // Epsilon-greedy where a tie that includes the previous action keeps it.
  Action select_persistent(const CompositeQ& cq) {
    if (spec_.epsilon > 0.0 && bernoulli(rng_, spec_.epsilon)) {
      return action_from_index(uniform_index(rng_, kActionCount));
    }
    if (held_) {
      const double kept = cq.values[index_of(*held_)];
      if (std::all_of(cq.values.begin(), cq.values.end(), [kept](double v) { return v <= kept; })) return *held_;
    }
    return select_action(cq, 0.0, rng_);
  }

  AgentSpec spec_;
  std::optional<Action> held_;
  std::vector<ResolutionStack> stacks_;
  BankSet banks_;
  std::vector<LayerStreams> layers_;
  std::vector<Desire> desires_;
  Rng rng_;
  long long transitions_ = 0;
};

}  // namespace neorl
