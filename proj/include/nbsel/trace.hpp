#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nbsel/objective.hpp"

namespace nbsel {

struct TraceRecord {
  double elapsed_ms = 0.0;
  std::uint64_t iteration = 0;
  long long operator_id = -1;  // -1 for the initial solution
  bool accepted = false;
  double best_cost = 0.0;
  double best_violation = 0.0;
  double best_total = 0.0;

  [[nodiscard]] ObjectiveValue best() const { return {best_cost, best_violation}; }
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct TraceHeader {
  std::string instance;
  std::string problem;
  std::string selector;
  std::string reward;
  std::uint64_t seed = 0;
  std::string budget;  // "iterations:N" or "seconds:S"
  std::string start;   // UTC timestamp

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct RunTrace {
  TraceHeader header;
  std::vector<TraceRecord> records;

  friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

/// Header line of key=value pairs, a column line, then one tab-separated
/// record per line. Reals are written with 17 significant digits.
void write_trace(std::ostream& out, const RunTrace& trace);
std::string format_trace(const RunTrace& trace);
RunTrace parse_trace(std::string_view text);
RunTrace load_trace(const std::string& path);
void save_trace(const std::string& path, const RunTrace& trace);

/// Timing-free rendering (no start stamp, no elapsed column) used to compare
/// runs that must behave identically.
std::string canonical_trace(const RunTrace& trace);

std::string format_real(double v);

}  // namespace nbsel
