#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nbsel/objective.hpp"
#include "nbsel/search_model.hpp"

namespace nbsel {

/// What the engine tells a selector after each iteration.
struct Transition {
  OperatorId operator_id = 0;
  MoveOutcome outcome;
  double reward = 0.0;
  bool episode_done = false;
  const SearchModel* state_after = nullptr;  // model positioned at s_{t+1}
};

/// Agent interface driven by the search loop.
class Selector {
 public:
  virtual ~Selector() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  /// `tabu[a]` is true for blocked operators; at least one entry is false.
  virtual OperatorId get_move(const SearchModel& model, const std::vector<bool>& tabu,
                              std::uint64_t step) = 0;
  virtual void learn(const Transition& transition) = 0;
  virtual void terminate_episode() {}
  /// Called once when the run ends, normally or not.
  virtual void finish() {}
};

std::vector<OperatorId> non_tabu_ids(const std::vector<bool>& tabu);

struct SelectorParams {
  double epsilon = 0.1;
  double ucb_c = 1.0;
  double alpha = 0.1;

  void validate() const;
};

struct BanditState {
  std::vector<double> estimates;
  std::vector<std::uint64_t> pulls;
  std::uint64_t step = 0;
  double alpha = 0.1;

  BanditState() = default;
  BanditState(std::size_t arms, double alpha_)
      : estimates(arms, 0.0), pulls(arms, 0), alpha(alpha_) {}
};

struct SlopeState {
  std::vector<double> mean_slope;
  std::vector<std::uint64_t> calls;

  SlopeState() = default;
  explicit SlopeState(std::size_t arms) : mean_slope(arms, 0.0), calls(arms, 0) {}
  void record(OperatorId op, double slope);
};

OperatorId select_random(std::span<const OperatorId> non_tabu, Rng& rng);
/// First id >= cursor (cyclically) in `non_tabu`; returns (id, id + 1 mod n).
std::pair<OperatorId, std::size_t> select_round_robin(std::span<const OperatorId> non_tabu,
                                                      std::size_t cursor, std::size_t n);
OperatorId select_bsf(const SlopeState& state, std::span<const OperatorId> non_tabu);
OperatorId select_epsilon_greedy(const BanditState& state, double epsilon,
                                 std::span<const OperatorId> non_tabu, Rng& rng);
OperatorId select_ucb(const BanditState& state, double c, std::span<const OperatorId> non_tabu);
void bandit_update(BanditState& state, OperatorId op, double reward);

class RandomSelector final : public Selector {
 public:
  explicit RandomSelector(std::uint64_t seed) : rng_(seed) {}
  [[nodiscard]] std::string name() const override { return "random"; }
  OperatorId get_move(const SearchModel&, const std::vector<bool>& tabu, std::uint64_t) override;
  void learn(const Transition&) override {}

 private:
  Rng rng_;
};

class RoundRobinSelector final : public Selector {
 public:
  [[nodiscard]] std::string name() const override { return "rr"; }
  OperatorId get_move(const SearchModel& model, const std::vector<bool>& tabu,
                      std::uint64_t) override;
  void learn(const Transition&) override {}

 private:
  std::size_t cursor_ = 0;
};

class BsfSelector final : public Selector {
 public:
  [[nodiscard]] std::string name() const override { return "bsf"; }
  OperatorId get_move(const SearchModel& model, const std::vector<bool>& tabu,
                      std::uint64_t) override;
  void learn(const Transition& transition) override;
  [[nodiscard]] const SlopeState& state() const { return state_; }

 private:
  SlopeState state_;
};

class EpsilonGreedySelector final : public Selector {
 public:
  EpsilonGreedySelector(SelectorParams params, std::uint64_t seed);
  [[nodiscard]] std::string name() const override { return "egreedy"; }
  OperatorId get_move(const SearchModel& model, const std::vector<bool>& tabu,
                      std::uint64_t) override;
  void learn(const Transition& transition) override;
  [[nodiscard]] const BanditState& state() const { return state_; }

 private:
  SelectorParams params_;
  BanditState state_;
  Rng rng_;
};

class UcbSelector final : public Selector {
 public:
  explicit UcbSelector(SelectorParams params);
  [[nodiscard]] std::string name() const override { return "ucb"; }
  OperatorId get_move(const SearchModel& model, const std::vector<bool>& tabu,
                      std::uint64_t) override;
  void learn(const Transition& transition) override;
  [[nodiscard]] const BanditState& state() const { return state_; }

 private:
  SelectorParams params_;
  BanditState state_;
};

/// Fixed policies shared by the mock agent and the in-process scripted selector.
class ScriptedPolicy {
 public:
  /// "always:K", "round-robin" or "lowest".
  static ScriptedPolicy parse(std::string_view text);

  /// May return a tabu id for "always:K"; callers validate.
  OperatorId choose(const std::vector<bool>& tabu);
  [[nodiscard]] std::string describe() const;

 private:
  enum class Kind { kAlways, kRoundRobin, kLowest };
  Kind kind_ = Kind::kRoundRobin;
  OperatorId fixed_ = 0;
  std::size_t cursor_ = 0;
};

class ScriptedSelector final : public Selector {
 public:
  explicit ScriptedSelector(ScriptedPolicy policy) : policy_(policy) {}
  [[nodiscard]] std::string name() const override { return "mock"; }
  OperatorId get_move(const SearchModel&, const std::vector<bool>& tabu,
                      std::uint64_t) override {
    return policy_.choose(tabu);
  }
  void learn(const Transition&) override {}

 private:
  ScriptedPolicy policy_;
};

}  // namespace nbsel
