#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nbsel/rewards.hpp"
#include "nbsel/search_model.hpp"
#include "nbsel/selectors.hpp"
#include "nbsel/trace.hpp"

namespace nbsel {

/// Either a wall-clock budget or an exact number of loop iterations.
struct Budget {
  enum class Kind { kIterations, kSeconds };
  Kind kind = Kind::kIterations;
  std::uint64_t iterations = 0;
  double seconds = 0.0;

  static Budget of_iterations(std::uint64_t n) { return {Kind::kIterations, n, 0.0}; }
  static Budget of_seconds(double s) { return {Kind::kSeconds, 0, s}; }
  [[nodiscard]] std::string describe() const;
  /// Rejects non-positive or non-finite wall-clock budgets.
  void validate() const;
};

/// Everything the loop did in one iteration, for observers and tests.
struct IterationEvent {
  std::uint64_t iteration = 0;
  std::vector<bool> tabu_before;
  OperatorId operator_id = 0;
  MoveOutcome outcome;
  bool accepted = false;
  bool restarted = false;
  double reward = 0.0;
  ObjectiveValue current_after;
  ObjectiveValue best;
};

enum class TraceDetail {
  kEveryIteration,
  kImprovements,  // initial record, best-so-far changes, and the final iteration
};

struct RunOptions {
  Budget budget;
  std::uint64_t seed = 0;
  TraceDetail detail = TraceDetail::kEveryIteration;
  /// Stop as soon as the best total drops to this value (within 1e-9 relative).
  std::optional<double> stop_at_total;
  std::function<void(const IterationEvent&)> observer;
};

struct RunResult {
  RunTrace trace;
  std::uint64_t iterations = 0;
  std::uint64_t restarts = 0;
  ObjectiveValue best;
  std::string best_solution;
};

/// The selection loop: pick a non-tabu operator, apply it if improving, grow
/// the tabu set otherwise, restart when every operator is tabu.
RunResult run_search(SearchModel& model, Selector& selector, const RewardFunction& reward,
                     const RunOptions& options);

/// Applies `op` to the model's current solution; `op` must not be tabu.
MoveOutcome attempt_move(SearchModel& model, const std::vector<bool>& tabu, OperatorId op);

std::string utc_timestamp();

}  // namespace nbsel
