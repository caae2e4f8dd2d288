#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cpomdp/rng.hpp"

namespace cpomdp {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Identity key for an observation node. Models with discrete (or discretized)
// observation spaces map observations onto keys so that value-equal
// observations share a tree node; continuous models return nullopt and every
// generated observation opens a fresh node.
struct ObsKey {
  std::array<std::int64_t, 8> v{};
  std::uint8_t n = 0;

  void push(std::int64_t x) { v[n++] = x; }

  friend bool operator==(const ObsKey& a, const ObsKey& b) {
    if (a.n != b.n) return false;
    for (std::uint8_t i = 0; i < a.n; ++i)
      if (a.v[i] != b.v[i]) return false;
    return true;
  }
};

struct ObsKeyHash {
  std::size_t operator()(const ObsKey& k) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ k.n;
    for (std::uint8_t i = 0; i < k.n; ++i) {
      h ^= static_cast<std::uint64_t>(k.v[i]) + 0x9E3779B97F4A7C15ULL +
           (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

template <class State, class Observation>
struct StepResult {
  State state;
  Observation obs;
  double reward = 0.0;
};

template <class M>
using StateOf = typename M::State;
template <class M>
using ActionOf = typename M::Action;
template <class M>
using ObsOf = typename M::Observation;
template <class M>
using StepOf = StepResult<typename M::State, typename M::Observation>;

template <class M>
concept FiniteActionModel = requires(const M& m) {
  { m.actions() } -> std::convertible_to<const std::vector<typename M::Action>&>;
};

template <class M>
concept ContinuousActionModel = requires(const M& m, RngStream& rng) {
  { m.sample_action(rng) } -> std::convertible_to<typename M::Action>;
};

template <class M>
concept HeuristicRolloutModel =
    requires(const M& m, const typename M::State& s, RngStream& rng) {
      { m.rollout_action(s, rng) } -> std::convertible_to<typename M::Action>;
    };

// G(s, a): samples (s', o, r). Stepping a terminal state is a caller bug.
template <class M>
StepOf<M> generative_step(const M& model, const StateOf<M>& s,
                          const ActionOf<M>& a, RngStream& rng) {
  if (model.is_terminal(s))
    throw DomainError("generative_step called on a terminal state");
  return model.step(s, a, rng);
}

// Alternating action/observation history rooted at a belief. Extension
// returns a copy, so histories built from a common root form a prefix tree.
template <class Action, class Observation>
class History {
 public:
  explicit History(std::uint64_t root_id = 0) : root_id_(root_id) {}

  std::uint64_t root_id() const { return root_id_; }
  bool has_pending_action() const { return pending_.has_value(); }
  int depth() const { return static_cast<int>(steps_.size()); }

  History with_action(const Action& a) const {
    if (pending_)
      throw DomainError("history already has an unmatched action");
    History h = *this;
    h.pending_ = a;
    return h;
  }

  History with_observation(const Observation& o) const {
    if (!pending_)
      throw DomainError("history observation without a preceding action");
    History h = *this;
    h.steps_.emplace_back(*h.pending_, o);
    h.pending_.reset();
    return h;
  }

  const std::vector<std::pair<Action, Observation>>& steps() const {
    return steps_;
  }

 private:
  std::uint64_t root_id_;
  std::vector<std::pair<Action, Observation>> steps_;
  std::optional<Action> pending_;
};

}  // namespace cpomdp
