#include "nbsel/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nbsel {

std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::kR1: return "r1";
    case RewardKind::kR2: return "r2";
    case RewardKind::kR3: return "r3";
  }
  return "?";
}

RewardKind parse_reward_kind(std::string_view text) {
  if (text == "r1" || text == "R1") return RewardKind::kR1;
  if (text == "r2" || text == "R2") return RewardKind::kR2;
  if (text == "r3" || text == "R3") return RewardKind::kR3;
  throw ConfigError("unknown reward '" + std::string(text) + "' (expected r1, r2 or r3)");
}

double reward_r1(const MoveOutcome& outcome) { return outcome.improvement(); }

double reward_r2(const MoveOutcome& outcome) {
  const double delta = outcome.improvement();
  if (delta <= 0.0) return 0.0;
  return std::max(0.0, std::log10(delta));
}

double reward_r3(const MoveOutcome& outcome, const RewardWeights& w) {
  const double e = outcome.elapsed_seconds;
  if (!(e > 0.0)) throw std::invalid_argument("R3 needs a positive elapsed time");
  const double delta = outcome.improvement();
  const double improved = outcome.after.total() < outcome.before.total() ? 1.0 : 0.0;
  return w.w1 * improved + w.w2 * e + w.w3 * delta / e;
}

RewardFunction::RewardFunction(RewardKind kind, RewardWeights weights)
    : kind_(kind), weights_(weights) {
  if (!std::isfinite(weights.w1) || !std::isfinite(weights.w2) || !std::isfinite(weights.w3)) {
    throw ConfigError("reward weights must be finite");
  }
}

double RewardFunction::operator()(const MoveOutcome& outcome) const {
  switch (kind_) {
    case RewardKind::kR1: return reward_r1(outcome);
    case RewardKind::kR2: return reward_r2(outcome);
    case RewardKind::kR3: return reward_r3(outcome, weights_);
  }
  return 0.0;
}

}  // namespace nbsel
