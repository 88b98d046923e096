#pragma once

#include <map>
#include <string>
#include <string_view>

#include "nbsel/rewards.hpp"
#include "nbsel/search_model.hpp"

namespace nbsel {

using Hyperparameters = std::map<std::string, double>;

struct TunedDefaults {
  Hyperparameters values;
  RewardKind column;  // reward column the values were taken from
};

/// Tuned settings for `agent` (egreedy, ucb, ddqn, ppo). When no column
/// exists for `reward` the problem's first tuned column is used instead.
/// R3 weights (w1, w2, w3) are included when `reward` is R3.
TunedDefaults tuned_defaults(ProblemKind problem, std::string_view agent, RewardKind reward);

/// Parses "key=value" overrides; values must be finite numbers.
Hyperparameters parse_overrides(const std::vector<std::string>& items);

/// Copies overrides on top of `base`. With `strict`, unknown keys throw.
void apply_overrides(Hyperparameters& base, const Hyperparameters& overrides, bool strict);

RewardWeights reward_weights_from(const Hyperparameters& params);

}  // namespace nbsel
