#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

#include "cpomdp/belief.hpp"
#include "cpomdp/model.hpp"

namespace cpomdp::domains {

// One-dimensional localization problem. The state is an integer position;
// moves are deterministic (s' = s + a) over {-10, -1, 0, 1, 10}; action 0
// terminates with +100 at the origin and -100 anywhere else, every other step
// costs -1. Observations are real-valued, N(s', sigma^2) with
// sigma = max(|s' - 10|, sigma_min): accurate only near the "light" at 10.
class LightDark {
 public:
  struct State {
    int position = 0;
    bool terminal = false;
    friend bool operator==(const State&, const State&) = default;
  };
  using Action = int;  // the move itself: one of {-10, -1, 0, 1, 10}
  using Observation = double;

  struct Params {
    double discount = 0.95;
    double sigma_min = 1e-2;
    int bound = 60;      // positions clamp to [-bound, bound]
    int init_min = -10;  // initial position uniform on [init_min, init_max]
    int init_max = 10;   // excluding 0
    double reinvigoration_fraction = 0.1;
  };

  LightDark() = default;
  explicit LightDark(Params p) : params_(p) {}

  const Params& params() const { return params_; }
  double discount() const { return params_.discount; }
  bool is_terminal(const State& s) const { return s.terminal; }

  const std::vector<Action>& actions() const { return actions_; }

  State sample_initial(RngStream& rng) const {
    int pos = 0;
    while (pos == 0) {
      pos = params_.init_min +
            static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(
                params_.init_max - params_.init_min + 1)));
    }
    return State{pos, false};
  }

  StepResult<State, Observation> step(const State& s, Action a,
                                      RngStream& rng) const {
    StepResult<State, Observation> out;
    if (a == 0) {
      out.state = State{s.position, true};
      out.reward = s.position == 0 ? 100.0 : -100.0;
    } else {
      const int pos =
          std::clamp(s.position + a, -params_.bound, params_.bound);
      out.state = State{pos, false};
      out.reward = -1.0;
    }
    out.obs = rng.normal(out.state.position, sigma_at(out.state.position));
    return out;
  }

  double reward(const State& s, Action a, const State&) const {
    if (a != 0) return -1.0;
    return s.position == 0 ? 100.0 : -100.0;
  }

  double obs_density(Observation o, const State&, Action,
                     const State& sp) const {
    const double sigma = sigma_at(sp.position);
    const double z = (o - sp.position) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * kSqrt2Pi);
  }

  double sigma_at(int position) const {
    return std::max(std::abs(position - 10.0), params_.sigma_min);
  }

  // Continuous observation space: every generated observation is a new node.
  std::optional<ObsKey> obs_key(const Observation&) const {
    return std::nullopt;
  }

  static std::vector<double> obs_coords(const Observation& o) { return {o}; }
  static Observation obs_from_coords(const std::vector<double>& c) {
    return c[0];
  }

  // Greedy-toward-origin rollout: declare at the origin, otherwise take the
  // move that lands closest to it.
  Action rollout_action(const State& s, RngStream&) const {
    if (s.position == 0) return 0;
    Action best = actions_[0];
    int best_dist = std::abs(s.position + actions_[0]);
    for (Action a : actions_) {
      if (a == 0) continue;
      const int dist = std::abs(s.position + a);
      if (dist < best_dist) {
        best = a;
        best_dist = dist;
      }
    }
    return best;
  }

  // The agent never knows its start: the initial belief is the initial-state
  // distribution regardless of the sampled true state.
  WeightedParticleBelief<State> initial_belief(const State&, int n_particles,
                                               RngStream& rng) const {
    std::vector<State> particles;
    particles.reserve(n_particles);
    for (int i = 0; i < n_particles; ++i)
      particles.push_back(sample_initial(rng));
    return WeightedParticleBelief<State>::uniform(std::move(particles));
  }

  // Environment-filter robustness hook: jitter a fraction of particles by
  // rounded Gaussian noise so sharp observations near the light cannot
  // permanently deplete the filter.
  void reinvigorate(WeightedParticleBelief<State>& b, RngStream& rng) const {
    const std::size_t count = static_cast<std::size_t>(
        params_.reinvigoration_fraction * static_cast<double>(b.size()));
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t idx = rng.uniform_int(b.size());
      State s = b.particle(idx);
      if (s.terminal) continue;
      const int jitter = static_cast<int>(std::lround(rng.normal(0.0, 2.0)));
      s.position =
          std::clamp(s.position + jitter, -params_.bound, params_.bound);
      b.replace_particle(idx, s);
    }
  }

 private:
  static constexpr double kSqrt2Pi = 2.5066282746310002;
  Params params_;
  std::vector<Action> actions_ = {-10, -1, 0, 1, 10};
};

}  // namespace cpomdp::domains
