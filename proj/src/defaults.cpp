#include "nbsel/defaults.hpp"

#include <array>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "text_util.hpp"

namespace nbsel {

namespace {

// Column order: TSP/R2, TSP/R3, PDPTW/R2, PDPTW/R3, CSP/R1.
using Row = std::array<double, 5>;

struct Entry {
  const char* key;
  Row values;
};

const std::vector<Entry> kEpsilonGreedy = {
    {"epsilon", {0.015, 0.043, 0.006, 0.005, 0.405}},
    {"alpha", {0.040, 0.581, 0.506, 0.523, 0.829}},
};

const std::vector<Entry> kUcb = {
    {"c", {0.332, 0.303, 0.395, 4.563, 4.281}},
    {"alpha", {0.136, 0.307, 0.967, 0.618, 0.138}},
};

const std::vector<Entry> kPpo = {
    {"c1_start", {0.24, 0.61, 0.09, 0.53, 0.34}},
    {"c1_end", {0.96, 0.04, 0.53, 0.42, 0.06}},
    {"c1_annealing_s", {196, 56, 41, 236, 196}},
    {"c2_start", {0.05, 0.9, 0.27, 0.19, 0.39}},
    {"c2_end", {0.04, 0.88, 0.06, 0.04, 0.20}},
    {"c2_annealing_s", {171, 241, 171, 181, 431}},
    {"batch_size", {345, 25, 725, 995, 1015}},
    {"minibatch_size", {5, 5, 255, 445, 15}},
    {"epochs", {71, 65, 75, 82, 65}},
    {"clipping", {13.85, 44.09, 47.1, 41.55, 11.8}},
    {"lr_actor", {0.176e-4, 1.82e-4, 35.9e-4, 0.175e-4, 18.1e-4}},
    {"lr_critic", {0.826e-4, 6.75e-4, 0.514e-4, 22.8e-4, 7.31e-4}},
};

const std::vector<Entry> kDdqn = {
    {"lr", {0.01e-2, 0.01e-2, 0.01e-2, 0.2e-2, 0.05e-2}},
    {"epsilon", {0.83, 0.65, 0.03, 0.38, 0.2}},
    {"batch_size", {19, 16, 236, 17, 250}},
    {"grad_clip", {49.5, 45.5, 0.55, 30, 35}},
    {"memory_size", {5000, 5000, 10000, 10000, 10000}},
};

// R3 weights per problem (TSP, PDPTW, CSP).
struct Weights3 {
  std::array<RewardWeights, 3> egreedy;
  std::array<RewardWeights, 3> ucb;
  RewardWeights drl;
};
const Weights3 kR3 = {
    {{{0.614, 0.891, 0.132}, {0.464, 0.243, 0.502}, {0.362, 0.059, 0.770}}},
    {{{0.693, 0.838, 0.482}, {0.240, 0.417, 0.657}, {0.239, 0.577, 0.195}}},
    {0.4, 0.2, 0.4},
};

std::size_t problem_index(ProblemKind p) {
  switch (p) {
    case ProblemKind::kTsp: return 0;
    case ProblemKind::kPdptw: return 1;
    case ProblemKind::kCsp: return 2;
  }
  return 0;
}

// Returns the table column and the reward it belongs to.
std::pair<std::size_t, RewardKind> column_for(ProblemKind p, RewardKind r) {
  switch (p) {
    case ProblemKind::kTsp: return r == RewardKind::kR3 ? std::pair{1UL, r} : std::pair{0UL, RewardKind::kR2};
    case ProblemKind::kPdptw: return r == RewardKind::kR3 ? std::pair{3UL, r} : std::pair{2UL, RewardKind::kR2};
    case ProblemKind::kCsp: return {4UL, RewardKind::kR1};
  }
  return {0UL, RewardKind::kR2};
}

}  // namespace

TunedDefaults tuned_defaults(ProblemKind problem, std::string_view agent, RewardKind reward) {
  const std::vector<Entry>* table = nullptr;
  if (agent == "egreedy") table = &kEpsilonGreedy;
  else if (agent == "ucb") table = &kUcb;
  else if (agent == "ppo") table = &kPpo;
  else if (agent == "ddqn") table = &kDdqn;

  TunedDefaults out{{}, reward};
  if (table != nullptr) {
    const auto [col, used] = column_for(problem, reward);
    out.column = used;
    for (const auto& e : *table) out.values[e.key] = e.values[col];
  }
  if (reward == RewardKind::kR3) {
    const std::size_t pi = problem_index(problem);
    RewardWeights w = kR3.drl;
    if (agent == "egreedy") w = kR3.egreedy[pi];
    else if (agent == "ucb") w = kR3.ucb[pi];
    out.values["w1"] = w.w1;
    out.values["w2"] = w.w2;
    out.values["w3"] = w.w3;
  }
  if (agent == "ddqn" || agent == "ppo") out.values["gamma"] = 1.0;
  return out;
}

Hyperparameters parse_overrides(const std::vector<std::string>& items) {
  Hyperparameters out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("parameter override '" + item + "' is not key=value");
    }
    const auto v = detail::parse_number<double>(item.substr(eq + 1));
    if (!v || !std::isfinite(*v)) {
      throw ConfigError("parameter override '" + item + "' needs a finite number");
    }
    out[item.substr(0, eq)] = *v;
  }
  return out;
}

void apply_overrides(Hyperparameters& base, const Hyperparameters& overrides, bool strict) {
  for (const auto& [k, v] : overrides) {
    if (strict && !base.contains(k)) {
      std::string known;
      for (const auto& [bk, _] : base) known += (known.empty() ? "" : ", ") + bk;
      throw ConfigError(fmt::format("unknown parameter '{}' (known: {})", k,
                                    known.empty() ? "none" : known));
    }
    base[k] = v;
  }
}

RewardWeights reward_weights_from(const Hyperparameters& params) {
  auto get = [&](const char* k) {
    const auto it = params.find(k);
    return it == params.end() ? 0.0 : it->second;
  };
  return {get("w1"), get("w2"), get("w3")};
}

}  // namespace nbsel
