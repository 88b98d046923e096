#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nbsel/objective.hpp"
#include "nbsel/trace.hpp"

namespace nbsel {

/// 0 if f = c*, 1 if infeasible, else |c - c*| / max(|c*|, |c|).
double primal_gap(const ObjectiveValue& best, double c_star);

using BestKnownTable = std::map<std::string, double>;

/// Two whitespace-separated columns per line (name, cost); '#' starts a comment.
BestKnownTable parse_best_known(std::string_view text);
BestKnownTable load_best_known(const std::string& path);

/// Gap of the best solution known at `t_ms`: the last record with
/// elapsed_ms <= t_ms, or 1 before the first record.
double gap_at(const RunTrace& trace, double c_star, double t_ms);

/// Time integral of the step-function gap over [0, budget_ms] divided by budget_ms.
double gap_integral(const RunTrace& trace, double c_star, double budget_ms);

/// Powers of two seconds below the budget, then the budget itself (all in ms).
std::vector<double> default_time_grid(double budget_ms);

/// Budget of a trace in ms when it ran on wall-clock time, otherwise the
/// timestamp of its last record.
double trace_budget_ms(const RunTrace& trace);

struct ReportRow {
  std::string selector;
  std::string reward;
  double checkpoint_ms = 0.0;
  double mean_gap = 0.0;
  std::size_t count = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct Report {
  std::vector<ReportRow> rows;  // sorted by selector, reward, checkpoint
  std::vector<std::string> missing_instances;
};

/// Unweighted mean gap over all (instance, seed) traces of each
/// (selector, reward) pair at every checkpoint.
Report aggregate_report(const std::vector<RunTrace>& traces, const BestKnownTable& best_known,
                        const std::vector<double>& grid_ms);

std::string format_report(const Report& report);

/// Every *.trace file in `dir`, in file-name order.
std::vector<RunTrace> load_trace_dir(const std::string& dir);

}  // namespace nbsel
