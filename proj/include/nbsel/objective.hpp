#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace nbsel {

using OperatorId = std::size_t;

/// Penalized objective f = c + v. The total is derived, never stored.
struct ObjectiveValue {
  double cost = 0.0;
  double violation = 0.0;

  [[nodiscard]] double total() const { return cost + violation; }
  [[nodiscard]] bool feasible() const { return violation == 0.0; }

  friend bool operator==(const ObjectiveValue&, const ObjectiveValue&) = default;
};

/// Result of one attempt of a move operator on the current solution.
struct MoveOutcome {
  OperatorId operator_id = 0;
  bool found_improving = false;
  ObjectiveValue before;
  ObjectiveValue after;
  double elapsed_seconds = 0.0;

  [[nodiscard]] double improvement() const {
    return before.total() - after.total();
  }
};

/// Misconfigured run (bad budget, unknown selector, bad parameter).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A selection agent broke the engine contract, e.g. returned a tabu id.
class ProtocolViolation : public std::runtime_error {
 public:
  ProtocolViolation(const std::string& what, long long offending_id)
      : std::runtime_error(what), offending_id_(offending_id) {}
  [[nodiscard]] long long offending_id() const { return offending_id_; }

 private:
  long long offending_id_;
};

/// Malformed instance file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed instance with inconsistent content (pairing, counts).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative tolerance used by scans to reject numerically-zero deltas.
inline double improvement_threshold(double reference_total) {
  const double scale = reference_total < 0 ? -reference_total : reference_total;
  return 1e-9 * (scale > 1.0 ? scale : 1.0);
}

/// Measures a move with a monotonic clock; the result is floored at 1 us.
class MoveTimer {
 public:
  MoveTimer() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    const auto d = std::chrono::steady_clock::now() - start_;
    const double s = std::chrono::duration<double>(d).count();
    return s < 1e-6 ? 1e-6 : s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace nbsel
