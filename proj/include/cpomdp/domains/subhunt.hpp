#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "cpomdp/belief.hpp"
#include "cpomdp/model.hpp"

namespace cpomdp::domains {

// Submarine pursuit on an n-by-n grid (20 in the full problem). The target
// heads for a goal edge unknown to the agent, moving two cells per step:
// either both toward the goal, or one forward and one to a random side. The
// agent moves three cells at a time, can engage (a hit scores 100 and ends
// the episode; only 60% likely once the target is aware), or ping with
// active sonar, which reveals the target at any range but makes it aware.
// Observations are 8 sonar beams; a beam covering the target within sensor
// range returns N(range, 0.5^2), anything else returns a far-range draw.
class SubHunt {
 public:
  enum Direction { kNorth = 0, kSouth = 1, kEast = 2, kWest = 3 };
  enum ActionId {
    kMoveNorth = 0,
    kMoveSouth = 1,
    kMoveEast = 2,
    kMoveWest = 3,
    kEngage = 4,
    kPing = 5,
  };

  struct State {
    std::int8_t ax = 1, ay = 1;  // agent cell, 1-based
    std::int8_t tx = 1, ty = 1;  // target cell
    bool aware = false;
    std::int8_t goal = kNorth;
    bool terminal = false;
    friend bool operator==(const State&, const State&) = default;
  };
  using Action = int;
  using Observation = std::array<double, 8>;

  struct Params {
    int grid_size = 20;
    double discount = 0.95;
    double hit_reward = 100.0;
    double aware_hit_prob = 0.6;
    double engage_range = 2.0;
    double passive_range = 3.0;
    double beam_sigma = 0.5;
    double far_range = 40.0;  // out-of-beam / out-of-range return mean
    double far_sigma = 5.0;
    int agent_step = 3;
  };

  SubHunt() = default;
  explicit SubHunt(Params p) : params_(p) {}

  const Params& params() const { return params_; }
  double discount() const { return params_.discount; }
  bool is_terminal(const State& s) const { return s.terminal; }
  const std::vector<Action>& actions() const { return actions_; }

  State sample_initial(RngStream& rng) const {
    State s;
    s.ax = cell(rng);
    s.ay = cell(rng);
    s.tx = cell(rng);
    s.ty = cell(rng);
    s.aware = false;
    s.goal = static_cast<std::int8_t>(rng.uniform_int(4));
    return s;
  }

  StepResult<State, Observation> step(const State& s, Action a,
                                      RngStream& rng) const {
    StepResult<State, Observation> out;
    State next = s;
    double reward = 0.0;
    bool hit = false;

    switch (a) {
      case kMoveNorth:
      case kMoveSouth:
      case kMoveEast:
      case kMoveWest:
        move_agent(next, static_cast<Direction>(a));
        break;
      case kEngage:
        if (target_in_engage_range(s)) {
          if (!s.aware || rng.uniform() < params_.aware_hit_prob) {
            hit = true;
            reward = params_.hit_reward;
          }
        }
        break;
      case kPing:
        next.aware = true;
        break;
      default:
        throw DomainError("unknown SubHunt action");
    }

    if (hit) {
      next.terminal = true;
    } else {
      move_target(next, rng);
      if (target_at_goal(next)) next.terminal = true;
    }

    out.state = next;
    out.reward = reward;
    out.obs = sample_observation(next, a, rng);
    return out;
  }

  double reward(const State& s, Action a, const State& sp) const {
    if (a != kEngage) return 0.0;
    // Hit iff the step that produced sp terminated by engagement; target
    // reaching its goal also terminates but only after a non-hit.
    return (sp.terminal && !target_at_goal(sp)) ? params_.hit_reward : 0.0;
  }

  double obs_density(const Observation& o, const State&, Action a,
                     const State& sp) const {
    const double range_limit =
        a == kPing ? std::numeric_limits<double>::infinity()
                   : params_.passive_range;
    const auto [beam, dist] = target_beam(sp);
    double density = 1.0;
    for (int k = 0; k < 8; ++k) {
      const bool sees = (k == beam) && dist <= range_limit;
      const double mean = sees ? dist : params_.far_range;
      const double sigma = sees ? params_.beam_sigma : params_.far_sigma;
      density *= normal_pdf(o[static_cast<std::size_t>(k)], mean, sigma);
    }
    return density;
  }

  std::optional<ObsKey> obs_key(const Observation&) const {
    return std::nullopt;
  }

  static std::vector<double> obs_coords(const Observation& o) {
    return std::vector<double>(o.begin(), o.end());
  }
  static Observation obs_from_coords(const std::vector<double>& c) {
    Observation o{};
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = c[i];
    return o;
  }

  // Fully-observed chase heuristic: engage when in range, otherwise close the
  // larger coordinate gap. Never pings (pinging has no value when the target
  // is visible).
  Action rollout_action(const State& s, RngStream&) const {
    if (target_in_engage_range(s)) return kEngage;
    const int dx = s.tx - s.ax;
    const int dy = s.ty - s.ay;
    if (std::abs(dx) >= std::abs(dy))
      return dx >= 0 ? kMoveEast : kMoveWest;
    return dy >= 0 ? kMoveNorth : kMoveSouth;
  }

  // The agent knows its own cell; the target cell and goal edge are unknown.
  WeightedParticleBelief<State> initial_belief(const State& true_s0,
                                               int n_particles,
                                               RngStream& rng) const {
    std::vector<State> particles;
    particles.reserve(n_particles);
    for (int i = 0; i < n_particles; ++i) {
      State s = sample_initial(rng);
      s.ax = true_s0.ax;
      s.ay = true_s0.ay;
      particles.push_back(s);
    }
    return WeightedParticleBelief<State>::uniform(std::move(particles));
  }

  bool target_in_engage_range(const State& s) const {
    const double dx = s.tx - s.ax;
    const double dy = s.ty - s.ay;
    return std::sqrt(dx * dx + dy * dy) <= params_.engage_range;
  }

  bool target_at_goal(const State& s) const {
    switch (s.goal) {
      case kNorth: return s.ty == params_.grid_size;
      case kSouth: return s.ty == 1;
      case kEast: return s.tx == params_.grid_size;
      case kWest: return s.tx == 1;
    }
    return false;
  }

  void move_agent(State& s, Direction dir) const {
    auto [dx, dy] = unit(dir);
    s.ax = clamp_cell(s.ax + dx * params_.agent_step);
    s.ay = clamp_cell(s.ay + dy * params_.agent_step);
  }

  // Either two steps forward or one forward plus one to a uniform side.
  void move_target(State& s, RngStream& rng) const {
    const auto [fx, fy] = unit(static_cast<Direction>(s.goal));
    if (rng.uniform() < 0.5) {
      s.tx = clamp_cell(s.tx + 2 * fx);
      s.ty = clamp_cell(s.ty + 2 * fy);
    } else {
      const int side = rng.uniform_int(2) == 0 ? 1 : -1;
      // A side step is perpendicular to the goal direction.
      const int sx = fy == 0 ? 0 : side;
      const int sy = fx == 0 ? 0 : side;
      s.tx = clamp_cell(s.tx + fx + sx);
      s.ty = clamp_cell(s.ty + fy + sy);
    }
  }

  // Enumerates the three target-move outcomes with probabilities; used by the
  // explicit MDP view so QMDP solves the same dynamics G samples.
  std::vector<std::pair<State, double>> target_move_outcomes(
      const State& s) const {
    const auto [fx, fy] = unit(static_cast<Direction>(s.goal));
    std::vector<std::pair<State, double>> out;
    State fwd = s;
    fwd.tx = clamp_cell(s.tx + 2 * fx);
    fwd.ty = clamp_cell(s.ty + 2 * fy);
    out.emplace_back(fwd, 0.5);
    for (int side : {1, -1}) {
      State diag = s;
      const int sx = fy == 0 ? 0 : side;
      const int sy = fx == 0 ? 0 : side;
      diag.tx = clamp_cell(s.tx + fx + sx);
      diag.ty = clamp_cell(s.ty + fy + sy);
      out.emplace_back(diag, 0.25);
    }
    for (auto& [state, p] : out)
      if (target_at_goal(state)) state.terminal = true;
    return out;
  }

  std::pair<int, double> target_beam(const State& s) const {
    const double dx = s.tx - s.ax;
    const double dy = s.ty - s.ay;
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (dist == 0.0) return {0, 0.0};
    double angle = std::atan2(dy, dx);
    if (angle < 0.0) angle += 2.0 * kPi;
    // Sectors of 45 degrees centered on the beam directions 2*pi*k/8.
    const int beam =
        static_cast<int>(std::floor((angle + kPi / 8.0) / (kPi / 4.0))) % 8;
    return {beam, dist};
  }

 private:
  std::int8_t cell(RngStream& rng) const {
    return static_cast<std::int8_t>(
        1 + rng.uniform_int(static_cast<std::uint64_t>(params_.grid_size)));
  }

  std::int8_t clamp_cell(int x) const {
    return static_cast<std::int8_t>(std::clamp(x, 1, params_.grid_size));
  }

  static std::pair<int, int> unit(Direction d) {
    switch (d) {
      case kNorth: return {0, 1};
      case kSouth: return {0, -1};
      case kEast: return {1, 0};
      case kWest: return {-1, 0};
    }
    return {0, 0};
  }

  Observation sample_observation(const State& sp, Action a,
                                 RngStream& rng) const {
    const double range_limit =
        a == kPing ? std::numeric_limits<double>::infinity()
                   : params_.passive_range;
    const auto [beam, dist] = target_beam(sp);
    Observation o{};
    for (int k = 0; k < 8; ++k) {
      const bool sees = (k == beam) && dist <= range_limit;
      o[static_cast<std::size_t>(k)] =
          sees ? rng.normal(dist, params_.beam_sigma)
               : rng.normal(params_.far_range, params_.far_sigma);
    }
    return o;
  }

  static double normal_pdf(double x, double mean, double sigma) {
    const double z = (x - mean) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * 2.5066282746310002);
  }

  static constexpr double kPi = 3.14159265358979323846;
  Params params_;
  std::vector<Action> actions_ = {kMoveNorth, kMoveSouth, kMoveEast,
                                  kMoveWest,  kEngage,    kPing};
};

}  // namespace cpomdp::domains
