#include "nbsel/trace.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "text_util.hpp"

namespace nbsel {

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

namespace {

constexpr std::string_view kMagic = "#trace";

void write_impl(std::ostream& out, const RunTrace& t, bool timing) {
  const auto& h = t.header;
  out << kMagic << " instance=" << h.instance << " problem=" << h.problem
      << " selector=" << h.selector << " reward=" << h.reward << " seed=" << h.seed
      << " budget=" << h.budget;
  if (timing) out << " start=" << h.start;
  out << '\n';
  if (timing) out << "elapsed_ms\t";
  out << "iteration\toperator\taccepted\tbest_cost\tbest_violation\tbest_total\n";
  for (const auto& r : t.records) {
    if (timing) out << format_real(r.elapsed_ms) << '\t';
    out << r.iteration << '\t' << r.operator_id << '\t' << (r.accepted ? 1 : 0) << '\t'
        << format_real(r.best_cost) << '\t' << format_real(r.best_violation) << '\t'
        << format_real(r.best_total) << '\n';
  }
}

template <class T>
T field(const std::string& tok, std::size_t line) {
  const auto v = detail::parse_number<T>(tok);
  if (!v) throw ParseError("bad trace field '" + tok + "'", line);
  return *v;
}

}  // namespace

void write_trace(std::ostream& out, const RunTrace& trace) { write_impl(out, trace, true); }

std::string format_trace(const RunTrace& trace) {
  std::ostringstream ss;
  write_impl(ss, trace, true);
  return ss.str();
}

std::string canonical_trace(const RunTrace& trace) {
  std::ostringstream ss;
  write_impl(ss, trace, false);
  return ss.str();
}

RunTrace parse_trace(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || !lines[0].starts_with(kMagic)) throw ParseError("missing trace header", 1);
  RunTrace t;
  const auto head = detail::split_ws(lines[0]);
  for (std::size_t i = 1; i < head.size(); ++i) {
    const auto eq = head[i].find('=');
    if (eq == std::string::npos) throw ParseError("header token without '='", 1);
    const std::string key = head[i].substr(0, eq);
    const std::string value = head[i].substr(eq + 1);
    if (key == "instance") t.header.instance = value;
    else if (key == "problem") t.header.problem = value;
    else if (key == "selector") t.header.selector = value;
    else if (key == "reward") t.header.reward = value;
    else if (key == "seed") t.header.seed = field<std::uint64_t>(value, 1);
    else if (key == "budget") t.header.budget = value;
    else if (key == "start") t.header.start = value;
  }
  for (std::size_t ln = 2; ln < lines.size(); ++ln) {
    std::vector<std::string> cols;
    std::string cur;
    for (char c : lines[ln]) {
      if (c == '\t') {
        cols.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    cols.push_back(cur);
    if (cols.size() == 1 && cols[0].empty()) continue;
    if (cols.size() != 7) throw ParseError("expected 7 columns", ln + 1);
    TraceRecord r;
    r.elapsed_ms = field<double>(cols[0], ln + 1);
    r.iteration = field<std::uint64_t>(cols[1], ln + 1);
    r.operator_id = field<long long>(cols[2], ln + 1);
    r.accepted = field<int>(cols[3], ln + 1) != 0;
    r.best_cost = field<double>(cols[4], ln + 1);
    r.best_violation = field<double>(cols[5], ln + 1);
    r.best_total = field<double>(cols[6], ln + 1);
    t.records.push_back(r);
  }
  return t;
}

RunTrace load_trace(const std::string& path) { return parse_trace(detail::read_file(path)); }

void save_trace(const std::string& path, const RunTrace& trace) {
  const std::string tmp = path + ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    write_trace(out, trace);
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nbsel
