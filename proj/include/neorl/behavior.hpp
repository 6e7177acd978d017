#pragma once

// Behavior synthesis: observation -> reward-weighted desires -> composite
// action values -> epsilon-greedy action.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "neorl/geometry.hpp"
#include "neorl/gvf_bank.hpp"
#include "neorl/random.hpp"
#include "neorl/waterworld.hpp"

namespace neorl {

/// Identifies one layer of one modality, e.g. "PC:N13".
struct LayerRef {
  Modality modality = Modality::PC;
  int resolution = 2;

  bool operator==(const LayerRef&) const = default;
  std::string str() const { return std::string(to_string(modality)) + ":N" + std::to_string(resolution); }
};

struct Desire {
  LayerRef layer;
  CellIndex target;
  CellIndex eval_state;
  double weight = 0.0;
};

struct AgentSpec {
  bool control = false;  // uniform random actor, no learning
  std::vector<Modality> modalities = {Modality::PC};
  std::vector<int> resolutions = prime_resolutions();
  LearnerParams learner;
  double epsilon = 0.1;

  void validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0, 1]");
    if (control) return;
    learner.validate();
    if (modalities.empty()) throw std::invalid_argument("agent needs at least one modality");
    for (std::size_t i = 0; i < modalities.size(); ++i) {
      for (std::size_t j = i + 1; j < modalities.size(); ++j) {
        if (modalities[i] == modalities[j]) throw std::invalid_argument("duplicate modality in agent spec");
      }
    }
    if (resolutions.empty()) throw std::invalid_argument("agent needs at least one resolution");
    (void)stacks();  // enforces ordering and N >= 2
  }

  std::vector<ResolutionStack> stacks() const {
    std::vector<ResolutionStack> out;
    if (control) return out;
    for (Modality m : modalities) out.push_back(ResolutionStack::make(m, resolutions));
    return out;
  }
};

struct PolicyConfig {
  double epsilon = 0.1;
  std::uint64_t seed = 0;
};

struct CompositeQ {
  ActionValues values{0.0, 0.0, 0.0, 0.0};
};

/// Appends one desire per (layer, object). PC layers evaluate the agent's own
/// cell against the object's cell; OVC layers evaluate the object's relative
/// vector against the zero-vector cell.
inline void derive_desires_into(const Observation& obs, const std::vector<ResolutionStack>& stacks,
                                std::vector<Desire>& out) {
  for (const ResolutionStack& stack : stacks) {
    const Bounds& b = stack.bounds();
    for (const NresMap& layer : stack.layers()) {
      const LayerRef ref{layer.modality(), layer.resolution()};
      if (layer.modality() == Modality::PC) {
        const CellIndex self = cell_index(clamp_to_bounds(obs.agent_pos, b), layer);
        for (const auto& o : obs.objects) {
          if (o.valence == 0.0) continue;
          out.push_back({ref, cell_index(clamp_to_bounds(o.pos, b), layer), self, o.valence});
        }
      } else {
        const CellIndex origin = cell_index(clamp_to_bounds({0.0, 0.0}, b), layer);
        for (const auto& o : obs.objects) {
          if (o.valence == 0.0) continue;
          const Vec2 rel = clamp_to_bounds(ovc_vector(o.pos, obs.agent_pos), b);
          out.push_back({ref, origin, cell_index(rel, layer), o.valence});
        }
      }
    }
  }
}

inline std::vector<Desire> derive_desires(const Observation& obs, const std::vector<ResolutionStack>& stacks) {
  std::vector<Desire> out;
  derive_desires_into(obs, stacks, out);
  return out;
}

inline std::vector<Desire> derive_desires(const Observation& obs, const AgentSpec& spec) {
  return derive_desires(obs, spec.stacks());
}

/// The learner banks of an agent, one per layer.
class BankSet {
 public:
  BankSet() = default;

  BankSet(const std::vector<ResolutionStack>& stacks, const LearnerParams& params) {
    for (const auto& stack : stacks) {
      for (const auto& layer : stack.layers()) add({layer.modality(), layer.resolution()}, params);
    }
  }

  LearnerBank& add(const LayerRef& ref, const LearnerParams& params) {
    if (find(ref)) throw std::invalid_argument("duplicate bank " + ref.str());
    refs_.push_back(ref);
    banks_.emplace_back(ref.str(), ref.resolution, params);
    return banks_.back();
  }

  const LearnerBank* find(const LayerRef& ref) const {
    for (std::size_t i = 0; i < refs_.size(); ++i) {
      if (refs_[i] == ref) return &banks_[i];
    }
    return nullptr;
  }
  LearnerBank* find(const LayerRef& ref) {
    return const_cast<LearnerBank*>(static_cast<const BankSet&>(*this).find(ref));
  }

  const LearnerBank& at(const LayerRef& ref) const {
    const LearnerBank* b = find(ref);
    if (!b) throw std::invalid_argument("no bank for layer " + ref.str());
    return *b;
  }
  LearnerBank& at(const LayerRef& ref) { return const_cast<LearnerBank&>(static_cast<const BankSet&>(*this).at(ref)); }

  std::size_t size() const { return banks_.size(); }
  const std::vector<LayerRef>& refs() const { return refs_; }
  std::vector<LearnerBank>& banks() { return banks_; }
  const std::vector<LearnerBank>& banks() const { return banks_; }

 private:
  std::vector<LayerRef> refs_;
  std::vector<LearnerBank> banks_;
};

/// Priority-weighted sum of the desired learners' action values.
inline CompositeQ composite_q(const std::vector<Desire>& desires, const BankSet& banks) {
  CompositeQ cq;
  const LearnerBank* cached = nullptr;
  LayerRef cached_ref;
  for (const Desire& d : desires) {
    if (!cached || !(cached_ref == d.layer)) {
      cached = &banks.at(d.layer);
      cached_ref = d.layer;
    }
    const double* v = cached->row(d.eval_state.flat) + static_cast<std::ptrdiff_t>(d.target.flat) * kActionCount;
    for (int a = 0; a < kActionCount; ++a) cq.values[a] += d.weight * v[a];
  }
  return cq;
}

/// Epsilon-greedy with uniform random tie-breaking among maximal actions.
inline Action select_action(const CompositeQ& cq, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && bernoulli(rng, epsilon)) return action_from_index(uniform_index(rng, kActionCount));
  double best = cq.values[0];
  for (int a = 1; a < kActionCount; ++a) best = std::max(best, cq.values[a]);
  std::array<int, kActionCount> ties{};
  int n_ties = 0;
  for (int a = 0; a < kActionCount; ++a) {
    if (cq.values[a] == best) ties[n_ties++] = a;
  }
  if (n_ties == 1) return action_from_index(ties[0]);
  return action_from_index(ties[uniform_index(rng, n_ties)]);
}

inline Action select_action(const CompositeQ& cq, const PolicyConfig& pc, Rng& rng) {
  return select_action(cq, pc.epsilon, rng);
}

}  // namespace neorl
