#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "cpomdp/model.hpp"

namespace cpomdp {

enum class RolloutKind { random, heuristic };

// Shared hyperparameters for the tree-search family. The depth-indexed
// schedules drive the modified solver's polynomial exploration and
// floor-increment widening; static k/alpha drive the DPW solvers.
struct SolverConfig {
  double c = 1.0;          // UCB exploration constant
  double k_action = 30.0;  // action progressive widening
  double alpha_action = 1.0 / 30.0;
  double k_obs = 5.0;  // observation progressive widening
  double alpha_obs = 1.0 / 15.0;
  bool widen_actions = false;  // finite spaces default to all-actions
  bool widen_obs = true;       // POMCP turns this off
  int pft_particles = 20;     // m for PFT-DPW
  int max_depth = 20;
  std::int64_t iterations = 1000;
  double time_budget_ms = 0.0;  // > 0 selects the wall-clock budget
  RolloutKind rollout = RolloutKind::random;

  // Modified-solver schedules, indexed by remaining depth d in [1, max_depth].
  // The convergence proof only needs decreasing exponents, not a specific
  // table, so these default to 1/(10*(max_depth - d) + 3).
  double modified_alpha(int remaining_depth) const {
    const int steps_from_root = max_depth - remaining_depth;
    return 1.0 / (10.0 * steps_from_root + 3.0);
  }
  double modified_e(int remaining_depth) const {
    const int steps_from_root = max_depth - remaining_depth;
    return 1.0 / (10.0 * steps_from_root + 3.0);
  }

  void validate() const {
    if (k_action <= 0.0 || k_obs <= 0.0)
      throw ConfigError("widening constants k must be positive");
    if (alpha_action < 0.0 || alpha_action > 1.0 || alpha_obs < 0.0 ||
        alpha_obs > 1.0)
      throw ConfigError("widening exponents alpha must lie in [0, 1]");
    if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
    if (pft_particles < 1) throw ConfigError("pft particle count must be >= 1");
    const bool has_iters = iterations > 0;
    const bool has_time = time_budget_ms > 0.0;
    if (has_iters == has_time)
      throw ConfigError("exactly one of iterations/time_budget_ms must be set");
  }
};

}  // namespace cpomdp
