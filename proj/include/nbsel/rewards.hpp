#pragma once

#include <string>
#include <string_view>

#include "nbsel/objective.hpp"

namespace nbsel {

struct RewardWeights {
  double w1 = 0.0;  // improvement indicator
  double w2 = 0.0;  // elapsed seconds
  double w3 = 0.0;  // improvement per second
};

enum class RewardKind { kR1, kR2, kR3 };

std::string_view to_string(RewardKind kind);
RewardKind parse_reward_kind(std::string_view text);

/// f(s_t) - f(s_{t+1}).
double reward_r1(const MoveOutcome& outcome);
/// max(0, log10(improvement)); zero when nothing improved.
double reward_r2(const MoveOutcome& outcome);
/// w1 * [improved] + w2 * E + w3 * improvement / E, E in seconds.
double reward_r3(const MoveOutcome& outcome, const RewardWeights& weights);

class RewardFunction {
 public:
  RewardFunction() = default;
  explicit RewardFunction(RewardKind kind, RewardWeights weights = {});

  [[nodiscard]] double operator()(const MoveOutcome& outcome) const;
  [[nodiscard]] RewardKind kind() const { return kind_; }
  [[nodiscard]] const RewardWeights& weights() const { return weights_; }
  [[nodiscard]] std::string_view name() const { return to_string(kind_); }

 private:
  RewardKind kind_ = RewardKind::kR1;
  RewardWeights weights_;
};

}  // namespace nbsel
