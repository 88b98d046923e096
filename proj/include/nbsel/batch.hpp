#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nbsel/defaults.hpp"
#include "nbsel/engine.hpp"

namespace nbsel {

/// Loads a TSPLib, Li & Lim or CSPLib file according to `problem`.
std::unique_ptr<SearchModel> load_model(ProblemKind problem, const std::string& path);

struct SelectorSpec {
  std::string selector;  // random | rr | bsf | egreedy | ucb | ddqn | ppo | mock
  RewardKind reward = RewardKind::kR1;
  Hyperparameters overrides;
  std::string bridge_address;  // required for ddqn, ppo, mock
  std::uint64_t seed = 0;
};

struct ConfiguredSelector {
  std::unique_ptr<Selector> selector;
  RewardFunction reward;
  Hyperparameters parameters;  // tuned defaults with overrides applied
};

/// Builds the selector and reward function, starting from the tuned
/// defaults for the problem and applying `spec.overrides` on top.
ConfiguredSelector configure_selector(ProblemKind problem, const SelectorSpec& spec);

bool is_known_selector(const std::string& name);

struct BatchConfig {
  ProblemKind problem = ProblemKind::kTsp;
  std::vector<std::string> instances;
  std::vector<std::string> selectors;
  std::vector<RewardKind> rewards;
  std::vector<std::uint64_t> seeds;
  Budget budget;
  TraceDetail detail = TraceDetail::kEveryIteration;
  Hyperparameters overrides;
  std::string bridge_address;
  std::string out_dir;
  bool force = false;
  unsigned jobs = 1;
};

struct CellResult {
  std::string instance;
  std::string selector;
  std::string reward;
  std::uint64_t seed = 0;
  std::string trace_file;
  std::string status;  // ok | skipped | failed
  std::string message;
};

std::string trace_file_name(const std::string& instance_path, const std::string& selector,
                            RewardKind reward, std::uint64_t seed);

/// Runs every (instance, selector, reward, seed) cell, writes one trace per
/// cell plus manifest.tsv. A failing cell is recorded and the batch goes on.
std::vector<CellResult> run_batch(const BatchConfig& config);

}  // namespace nbsel
