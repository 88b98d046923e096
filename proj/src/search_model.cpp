#include "nbsel/search_model.hpp"

#include <cmath>
#include <string>

namespace nbsel {

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kTsp: return "tsp";
    case ProblemKind::kPdptw: return "pdptw";
    case ProblemKind::kCsp: return "csp";
  }
  return "?";
}

ProblemKind parse_problem_kind(std::string_view text) {
  if (text == "tsp") return ProblemKind::kTsp;
  if (text == "pdptw") return ProblemKind::kPdptw;
  if (text == "csp") return ProblemKind::kCsp;
  throw ConfigError("unknown problem '" + std::string(text) + "' (expected tsp, pdptw or csp)");
}

namespace {
bool finite_all(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}
}  // namespace

bool all_finite(const StateEncoding& encoding) {
  if (const auto* g = std::get_if<GraphEncoding>(&encoding)) {
    if (!finite_all(g->vertex_attrs)) return false;
    for (const auto& e : g->edges) {
      if (!finite_all(e.attrs)) return false;
    }
    return true;
  }
  const auto& m = std::get<MatrixEncoding>(encoding);
  return finite_all(m.state) && finite_all(m.ratios);
}

}  // namespace nbsel
