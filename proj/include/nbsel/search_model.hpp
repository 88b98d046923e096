#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "nbsel/objective.hpp"
#include "nbsel/state_encoding.hpp"

namespace nbsel {

using Rng = std::mt19937_64;

enum class ProblemKind { kTsp, kPdptw, kCsp };

std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view text);

/// A problem instance bound to a mutable current solution and a best-so-far
/// snapshot. The search engine drives it exclusively through this interface.
class SearchModel {
 public:
  virtual ~SearchModel() = default;

  [[nodiscard]] virtual ProblemKind kind() const = 0;
  [[nodiscard]] virtual std::string_view instance_name() const = 0;
  [[nodiscard]] virtual std::size_t operator_count() const = 0;
  [[nodiscard]] virtual std::string_view operator_name(OperatorId op) const = 0;

  /// Replaces the current solution with a freshly sampled one that satisfies
  /// all hard constraints.
  virtual void restart(Rng& rng) = 0;

  [[nodiscard]] virtual ObjectiveValue objective() const = 0;

  /// Best-improving scan of the operator's neighborhood; applies the best
  /// strictly improving candidate if any. Solution untouched otherwise.
  virtual MoveOutcome apply_operator(OperatorId op) = 0;

  /// Copies the current solution into the best-so-far slot.
  virtual void keep_current_as_best() = 0;
  [[nodiscard]] virtual ObjectiveValue best_objective() const = 0;
  [[nodiscard]] virtual std::string describe_best() const = 0;

  [[nodiscard]] virtual StateEncoding encode_state() const = 0;
  [[nodiscard]] virtual EncodingSchema encoding_schema() const = 0;
};

}  // namespace nbsel
