#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "cpomdp/belief.hpp"
#include "cpomdp/model.hpp"

namespace cpomdp {

// Snaps x to the center of its cell in a width-sized grid: [i*w, (i+1)*w)
// maps to (i + 0.5) * w. Idempotent because centers stay in their own cell.
inline double snap_to_bin(double x, double width) {
  if (width <= 0.0) throw ConfigError("discretization bin width must be > 0");
  return (std::floor(x / width) + 0.5) * width;
}

inline std::int64_t bin_index(double x, double width) {
  return static_cast<std::int64_t>(std::floor(x / width));
}

// Wraps a model so observations (and optionally actions) live on a grid.
// State transitions and rewards pass through untouched; only the observation
// channel is snapped, and the wrapped density is the inner density evaluated
// at the bin representative.
//
// The wrapped model requires the inner observation to expose its coordinates
// through Inner::obs_coords / Inner::obs_from_coords.
template <class Inner>
class DiscretizedModel {
 public:
  using State = typename Inner::State;
  using Action = typename Inner::Action;
  using Observation = typename Inner::Observation;

  DiscretizedModel(Inner inner, double obs_width,
                   std::vector<Action> action_grid = {})
      : inner_(std::move(inner)),
        obs_width_(obs_width),
        action_grid_(std::move(action_grid)) {
    if (obs_width <= 0.0)
      throw ConfigError("discretization bin width must be > 0");
  }

  const Inner& inner() const { return inner_; }
  double obs_width() const { return obs_width_; }
  bool has_action_grid() const { return !action_grid_.empty(); }

  double discount() const { return inner_.discount(); }
  bool is_terminal(const State& s) const { return inner_.is_terminal(s); }
  State sample_initial(RngStream& rng) const {
    return inner_.sample_initial(rng);
  }

  StepResult<State, Observation> step(const State& s, const Action& a,
                                      RngStream& rng) const {
    auto r = inner_.step(s, a, rng);
    r.obs = discretize(r.obs);
    return r;
  }

  double reward(const State& s, const Action& a, const State& sp) const {
    return inner_.reward(s, a, sp);
  }

  double obs_density(const Observation& o, const State& s, const Action& a,
                     const State& sp) const {
    return inner_.obs_density(discretize(o), s, a, sp);
  }

  Observation discretize(const Observation& o) const {
    auto coords = Inner::obs_coords(o);
    for (double& x : coords) x = snap_to_bin(x, obs_width_);
    return Inner::obs_from_coords(coords);
  }

  std::optional<ObsKey> obs_key(const Observation& o) const {
    auto coords = Inner::obs_coords(o);
    ObsKey key;
    for (double x : coords) key.push(bin_index(x, obs_width_));
    return key;
  }

  const std::vector<Action>& actions() const
    requires FiniteActionModel<Inner>
  {
    return inner_.actions();
  }

  const std::vector<Action>& actions() const
    requires(!FiniteActionModel<Inner>)
  {
    if (action_grid_.empty())
      throw ConfigError("discretized model needs an action grid");
    return action_grid_;
  }

  Action rollout_action(const State& s, RngStream& rng) const
    requires HeuristicRolloutModel<Inner>
  {
    return inner_.rollout_action(s, rng);
  }

  WeightedParticleBelief<State> initial_belief(const State& true_s0,
                                               int n_particles,
                                               RngStream& rng) const {
    return inner_.initial_belief(true_s0, n_particles, rng);
  }

  void reinvigorate(WeightedParticleBelief<State>& b, RngStream& rng) const
    requires ReinvigoratingModel<Inner>
  {
    inner_.reinvigorate(b, rng);
  }

 private:
  Inner inner_;
  double obs_width_;
  std::vector<Action> action_grid_;
};

}  // namespace cpomdp
