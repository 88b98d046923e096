#include "nbsel/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "text_util.hpp"

namespace nbsel {

double primal_gap(const ObjectiveValue& best, double c_star) {
  if (!std::isfinite(c_star)) throw ValidationError("best-known cost must be finite");
  if (best.total() == c_star) return 0.0;
  if (best.violation > 0.0) return 1.0;
  const double denom = std::max(std::abs(c_star), std::abs(best.cost));
  if (denom == 0.0) return 0.0;
  return std::abs(best.cost - c_star) / denom;
}

BestKnownTable parse_best_known(std::string_view text) {
  BestKnownTable table;
  const auto lines = detail::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = lines[ln];
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw ParseError("expected: instance cost", ln + 1);
    const auto v = detail::parse_number<double>(toks[1]);
    if (!v) throw ParseError("bad cost '" + toks[1] + "'", ln + 1);
    if (!std::isfinite(*v)) throw ValidationError(fmt::format("line {}: cost must be finite", ln + 1));
    if (!table.emplace(toks[0], *v).second) {
      throw ValidationError(fmt::format("line {}: duplicate instance '{}'", ln + 1, toks[0]));
    }
  }
  return table;
}

BestKnownTable load_best_known(const std::string& path) {
  return parse_best_known(detail::read_file(path));
}

double gap_at(const RunTrace& trace, double c_star, double t_ms) {
  double gap = 1.0;
  for (const auto& r : trace.records) {
    if (r.elapsed_ms > t_ms) break;
    gap = primal_gap(r.best(), c_star);
  }
  return gap;
}

double gap_integral(const RunTrace& trace, double c_star, double budget_ms) {
  if (!(budget_ms > 0.0)) throw ConfigError("gap integral needs a positive budget");
  double area = 0.0;
  double t = 0.0;
  double gap = 1.0;
  for (const auto& r : trace.records) {
    const double at = std::clamp(r.elapsed_ms, 0.0, budget_ms);
    area += gap * (at - t);
    t = at;
    gap = primal_gap(r.best(), c_star);
    if (r.elapsed_ms >= budget_ms) break;
  }
  area += gap * (budget_ms - t);
  return area / budget_ms;
}

std::vector<double> default_time_grid(double budget_ms) {
  std::vector<double> grid;
  for (double s = 1000.0; s < budget_ms; s *= 2.0) grid.push_back(s);
  grid.push_back(budget_ms);
  return grid;
}

double trace_budget_ms(const RunTrace& trace) {
  const std::string& b = trace.header.budget;
  if (b.starts_with("seconds:")) {
    if (const auto s = detail::parse_number<double>(b.substr(8)); s && *s > 0) return *s * 1000.0;
  }
  return trace.records.empty() ? 0.0 : trace.records.back().elapsed_ms;
}

Report aggregate_report(const std::vector<RunTrace>& traces, const BestKnownTable& best_known,
                        const std::vector<double>& grid_ms) {
  struct Acc {
    std::vector<double> sums;
    std::size_t count = 0;
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;
  std::set<std::string> missing;
  for (const auto& t : traces) {
    const auto it = best_known.find(t.header.instance);
    if (it == best_known.end()) {
      missing.insert(t.header.instance);
      continue;
    }
    auto& a = acc[{t.header.selector, t.header.reward}];
    a.sums.resize(grid_ms.size(), 0.0);
    for (std::size_t k = 0; k < grid_ms.size(); ++k) a.sums[k] += gap_at(t, it->second, grid_ms[k]);
    ++a.count;
  }
  Report report;
  for (const auto& [key, a] : acc) {
    for (std::size_t k = 0; k < grid_ms.size(); ++k) {
      report.rows.push_back({key.first, key.second, grid_ms[k],
                             a.sums[k] / static_cast<double>(a.count), a.count});
    }
  }
  report.missing_instances.assign(missing.begin(), missing.end());
  return report;
}

std::string format_report(const Report& report) {
  std::ostringstream out;
  out << "selector\treward\tcheckpoint_ms\tmean_gap\tcount\n";
  for (const auto& r : report.rows) {
    out << r.selector << '\t' << r.reward << '\t' << format_real(r.checkpoint_ms) << '\t'
        << format_real(r.mean_gap) << '\t' << r.count << '\n';
  }
  if (!report.missing_instances.empty()) {
    out << "# excluded, no best-known cost:";
    for (const auto& m : report.missing_instances) out << ' ' << m;
    out << '\n';
  }
  return out.str();
}

std::vector<RunTrace> load_trace_dir(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".trace") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunTrace> traces;
  for (const auto& f : files) {
    try {
      traces.push_back(load_trace(f.string()));
    } catch (const ParseError& e) {
      throw ParseError(f.string() + ": " + e.what());
    }
  }
  return traces;
}

}  // namespace nbsel
