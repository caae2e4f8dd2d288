#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cpomdp/model.hpp"
#include "cpomdp/rng.hpp"

namespace cpomdp {

// Particle belief with nonnegative weights. The cumulative-weight array is
// kept alongside the weights so sampling is a binary search.
template <class State>
class WeightedParticleBelief {
 public:
  WeightedParticleBelief() = default;

  WeightedParticleBelief(std::vector<State> particles,
                         std::vector<double> weights)
      : particles_(std::move(particles)), weights_(std::move(weights)) {
    if (particles_.empty() || particles_.size() != weights_.size())
      throw DomainError("belief needs matching, nonempty particle/weight lists");
    rebuild_cumulative();
  }

  static WeightedParticleBelief uniform(std::vector<State> particles) {
    std::vector<double> w(particles.size(), 1.0);
    return WeightedParticleBelief(std::move(particles), std::move(w));
  }

  std::size_t size() const { return particles_.size(); }
  const std::vector<State>& particles() const { return particles_; }
  const std::vector<double>& weights() const { return weights_; }
  double total_weight() const { return cumulative_.back(); }

  const State& particle(std::size_t i) const { return particles_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  std::size_t sample_index(RngStream& rng) const {
    const double total = cumulative_.back();
    if (total <= 0.0) throw DomainError("belief has all-zero weights");
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
    if (i >= particles_.size()) i = particles_.size() - 1;
    return i;
  }

  const State& sample_state(RngStream& rng) const {
    return particles_[sample_index(rng)];
  }

  // ESS = (sum w)^2 / sum w^2; in [1, n] whenever some weight is positive.
  double effective_sample_size() const {
    double sum = 0.0, sumsq = 0.0;
    for (double w : weights_) {
      sum += w;
      sumsq += w * w;
    }
    if (sumsq <= 0.0) return 0.0;
    return sum * sum / sumsq;
  }

  // Used by reinvigoration hooks; restores the sampling invariants.
  void replace_particle(std::size_t i, State s) {
    particles_[i] = std::move(s);
  }

  void set_uniform_weights() {
    std::fill(weights_.begin(), weights_.end(), 1.0);
    rebuild_cumulative();
  }

 private:
  void rebuild_cumulative() {
    cumulative_.resize(weights_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] < 0.0 || !std::isfinite(weights_[i]))
        throw DomainError("belief weights must be finite and nonnegative");
      acc += weights_[i];
      cumulative_[i] = acc;
    }
  }

  std::vector<State> particles_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

template <class State>
struct FilterResult {
  WeightedParticleBelief<State> belief;
  bool depleted = false;       // all importance weights were zero
  bool reinvigorated = false;  // domain hook fired on low ESS
};

template <class M>
concept ReinvigoratingModel =
    requires(const M& m, WeightedParticleBelief<typename M::State>& b,
             RngStream& rng) {
      { m.reinvigorate(b, rng) };
    };

namespace detail {

// Terminal particles cannot have produced an observation from a continued
// episode, so they get importance weight zero.
template <class M>
struct Propagated {
  std::vector<StateOf<M>> states;
  std::vector<double> weights;
  std::vector<double> rewards;
  double weight_sum = 0.0;
};

template <class M>
Propagated<M> propagate_and_weight(const M& model,
                                   const WeightedParticleBelief<StateOf<M>>& b,
                                   const ActionOf<M>& a, const ObsOf<M>& o,
                                   int m, RngStream& rng) {
  Propagated<M> out;
  out.states.reserve(m);
  out.weights.reserve(m);
  out.rewards.reserve(m);
  for (int i = 0; i < m; ++i) {
    const StateOf<M>& s = b.sample_state(rng);
    if (model.is_terminal(s)) {
      out.states.push_back(s);
      out.weights.push_back(0.0);
      out.rewards.push_back(0.0);
      continue;
    }
    StepOf<M> st = model.step(s, a, rng);
    const double w = model.obs_density(o, s, a, st.state);
    out.weights.push_back(w);
    out.rewards.push_back(st.reward);
    out.states.push_back(std::move(st.state));
    out.weight_sum += w;
  }
  return out;
}

template <class State>
WeightedParticleBelief<State> resample(const std::vector<State>& states,
                                       const std::vector<double>& weights,
                                       double weight_sum, int m,
                                       RngStream& rng, bool& depleted) {
  depleted = weight_sum <= 0.0;
  std::vector<State> drawn;
  drawn.reserve(m);
  if (depleted) {
    // Depletion fallback: keep the propagated set with uniform weights.
    for (int i = 0; i < m; ++i)
      drawn.push_back(states[rng.uniform_int(states.size())]);
  } else {
    std::vector<double> cum(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      cum[i] = acc;
    }
    for (int i = 0; i < m; ++i) {
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cum.begin(), cum.end(), u);
      std::size_t idx = static_cast<std::size_t>(it - cum.begin());
      if (idx >= states.size()) idx = states.size() - 1;
      drawn.push_back(states[idx]);
    }
  }
  return WeightedParticleBelief<State>::uniform(std::move(drawn));
}

}  // namespace detail

// Sequential importance resampling step for the environment loop: propagate m
// draws through G, weight by Z against the observation actually received,
// resample back to m uniform-weight particles.
template <class M>
FilterResult<StateOf<M>> filter_update(
    const M& model, const WeightedParticleBelief<StateOf<M>>& belief,
    const ActionOf<M>& a, const ObsOf<M>& o, int m, RngStream& rng) {
  if (m < 1) throw DomainError("filter_update requires m >= 1");
  auto prop = detail::propagate_and_weight(model, belief, a, o, m, rng);

  FilterResult<StateOf<M>> result;
  const double ess_before =
      WeightedParticleBelief<StateOf<M>>(prop.states, prop.weights)
          .effective_sample_size();
  result.belief = detail::resample(prop.states, prop.weights, prop.weight_sum,
                                   m, rng, result.depleted);
  if constexpr (ReinvigoratingModel<M>) {
    if (result.depleted || ess_before < 0.1 * m) {
      model.reinvigorate(result.belief, rng);
      result.reinvigorated = true;
    }
  }
  return result;
}

template <class State>
struct GpfResult {
  WeightedParticleBelief<State> belief;
  double mean_reward = 0.0;
  bool terminal = false;  // no live particle remains
  bool depleted = false;
};

template <class M>
bool belief_is_terminal(const M& model,
                        const WeightedParticleBelief<StateOf<M>>& b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.weight(i) > 0.0 && !model.is_terminal(b.particle(i))) return false;
  }
  return true;
}

// G_PF(m): the belief-MDP generative model used by PFT-DPW. One state sampled
// from the belief drives the simulated observation; m sampled particles are
// propagated, weighted by Z against that observation, and resampled. The step
// reward is the weight-normalized mean of the per-particle rewards.
template <class M>
GpfResult<StateOf<M>> gpf_step(const M& model,
                               const WeightedParticleBelief<StateOf<M>>& belief,
                               const ActionOf<M>& a, int m, RngStream& rng) {
  if (m < 1) throw DomainError("gpf_step requires m >= 1");

  // Sample the observation-generating state among live particles.
  std::vector<double> live_cum;
  std::vector<std::size_t> live_idx;
  double live_total = 0.0;
  for (std::size_t i = 0; i < belief.size(); ++i) {
    if (belief.weight(i) > 0.0 && !model.is_terminal(belief.particle(i))) {
      live_total += belief.weight(i);
      live_cum.push_back(live_total);
      live_idx.push_back(i);
    }
  }
  GpfResult<StateOf<M>> result;
  if (live_idx.empty()) {
    result.terminal = true;
    result.belief = belief;
    return result;
  }
  const double u = rng.uniform() * live_total;
  auto it = std::upper_bound(live_cum.begin(), live_cum.end(), u);
  std::size_t pick = static_cast<std::size_t>(it - live_cum.begin());
  if (pick >= live_idx.size()) pick = live_idx.size() - 1;
  const StateOf<M>& gen = belief.particle(live_idx[pick]);
  const ObsOf<M> o = model.step(gen, a, rng).obs;

  auto prop = detail::propagate_and_weight(model, belief, a, o, m, rng);

  double reward_acc = 0.0;
  if (prop.weight_sum > 0.0) {
    for (std::size_t i = 0; i < prop.weights.size(); ++i)
      reward_acc += prop.weights[i] * prop.rewards[i];
    result.mean_reward = reward_acc / prop.weight_sum;
  } else {
    // Depleted: fall back to the unweighted mean over propagated particles.
    for (double r : prop.rewards) reward_acc += r;
    result.mean_reward = reward_acc / static_cast<double>(prop.rewards.size());
  }

  result.belief = detail::resample(prop.states, prop.weights, prop.weight_sum,
                                   m, rng, result.depleted);
  result.terminal = belief_is_terminal(model, result.belief);
  return result;
}

}  // namespace cpomdp
