#include "nbsel/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "text_util.hpp"

namespace nbsel::tsp {

double TspInstance::max_distance() const {
  double m = 0.0;
  for (double v : distances) m = std::max(m, v);
  return m;
}

double TspInstance::unrouted_penalty() const {
  return static_cast<double>(n) * max_distance() + 1.0;
}

TspSolution TspSolution::empty(std::size_t n) {
  TspSolution s;
  s.unrouted.resize(n);
  std::iota(s.unrouted.begin(), s.unrouted.end(), std::size_t{0});
  return s;
}

TspInstance make_instance(std::vector<double> distances, std::size_t n, std::string name) {
  if (distances.size() != n * n) {
    throw std::invalid_argument("distance matrix size does not match n*n");
  }
  TspInstance inst;
  inst.name = std::move(name);
  inst.n = n;
  inst.distances = std::move(distances);
  return inst;
}

TspInstance make_euclidean_instance(std::vector<std::pair<double, double>> coords,
                                    std::string name) {
  const std::size_t n = coords.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = coords[i].first - coords[j].first;
      const double dy = coords[i].second - coords[j].second;
      dist[i * n + j] = std::floor(std::sqrt(dx * dx + dy * dy) + 0.5);
    }
  }
  TspInstance inst = make_instance(std::move(dist), n, std::move(name));
  inst.coords = std::move(coords);
  return inst;
}

double tour_length(const TspInstance& instance, const std::vector<std::size_t>& path) {
  const std::size_t len = path.size();
  if (len < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    total += instance.d(path[i], path[(i + 1) % len]);
  }
  return total;
}

ObjectiveValue objective(const TspInstance& instance, const TspSolution& solution) {
  return {tour_length(instance, solution.path),
          static_cast<double>(solution.unrouted.size()) * instance.unrouted_penalty()};
}

namespace {

// Applies `apply` to a copy and keeps it only if the recomputed total drops.
template <class Apply>
MoveOutcome commit(const TspInstance& instance, TspSolution& solution, OperatorId op,
                   const ObjectiveValue& before, const MoveTimer& timer, bool have_candidate,
                   Apply&& apply) {
  MoveOutcome out{op, false, before, before, 0.0};
  if (have_candidate) {
    TspSolution next = solution;
    apply(next);
    const ObjectiveValue after = objective(instance, next);
    if (after.total() < before.total()) {
      solution = std::move(next);
      out.found_improving = true;
      out.after = after;
    }
  }
  out.elapsed_seconds = timer.seconds();
  return out;
}

}  // namespace

MoveOutcome op_insert(const TspInstance& instance, TspSolution& solution) {
  const MoveTimer timer;
  const ObjectiveValue before = objective(instance, solution);
  const auto& p = solution.path;
  const std::size_t len = p.size();
  const double penalty = instance.unrouted_penalty();
  const double threshold = -improvement_threshold(before.total());

  double best_delta = threshold;
  std::size_t best_u = 0;
  std::size_t best_k = 0;
  bool found = false;
  for (std::size_t u : solution.unrouted) {
    for (std::size_t k = 0; k <= len; ++k) {
      double dc = 0.0;
      if (len > 0) {
        const std::size_t prev = p[(k + len - 1) % len];
        const std::size_t next = p[k % len];
        dc = instance.d(prev, u) + instance.d(u, next) - instance.d(prev, next);
      }
      const double delta = dc - penalty;
      if (delta < best_delta) {
        best_delta = delta;
        best_u = u;
        best_k = k;
        found = true;
      }
    }
  }
  return commit(instance, solution, kInsert, before, timer, found, [&](TspSolution& s) {
    s.path.insert(s.path.begin() + static_cast<std::ptrdiff_t>(best_k), best_u);
    s.unrouted.erase(std::find(s.unrouted.begin(), s.unrouted.end(), best_u));
  });
}

MoveOutcome op_move_node(const TspInstance& instance, TspSolution& solution) {
  const MoveTimer timer;
  const ObjectiveValue before = objective(instance, solution);
  const auto& p = solution.path;
  const std::size_t len = p.size();
  const double threshold = -improvement_threshold(before.total());

  double best_delta = threshold;
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  bool found = false;
  if (len > 2) {
    std::vector<std::size_t> order(len);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    const std::size_t rest = len - 1;
    for (std::size_t i : order) {
      const std::size_t u = p[i];
      const std::size_t prev = p[(i + len - 1) % len];
      const std::size_t next = p[(i + 1) % len];
      const double removal = instance.d(prev, next) - instance.d(prev, u) - instance.d(u, next);
      auto reduced = [&](std::size_t x) { return x < i ? p[x] : p[x + 1]; };
      for (std::size_t j = 0; j < len; ++j) {
        if (j == i) continue;
        const std::size_t a = reduced((j + rest - 1) % rest);
        const std::size_t b = reduced(j % rest);
        const double delta =
            removal + instance.d(a, u) + instance.d(u, b) - instance.d(a, b);
        if (delta < best_delta) {
          best_delta = delta;
          best_i = i;
          best_j = j;
          found = true;
        }
      }
    }
  }
  return commit(instance, solution, kMove, before, timer, found, [&](TspSolution& s) {
    const std::size_t u = s.path[best_i];
    s.path.erase(s.path.begin() + static_cast<std::ptrdiff_t>(best_i));
    s.path.insert(s.path.begin() + static_cast<std::ptrdiff_t>(best_j), u);
  });
}

MoveOutcome op_two_opt(const TspInstance& instance, TspSolution& solution) {
  const MoveTimer timer;
  const ObjectiveValue before = objective(instance, solution);
  const auto& p = solution.path;
  const std::size_t len = p.size();
  const double threshold = -improvement_threshold(before.total());

  double best_delta = threshold;
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  bool found = false;
  for (std::size_t i = 0; i + 1 < len; ++i) {
    for (std::size_t j = i + 1; j < len; ++j) {
      if (i == 0 && j == len - 1) continue;  // whole-tour reversal
      const std::size_t a = p[(i + len - 1) % len];
      const std::size_t b = p[i];
      const std::size_t c = p[j];
      const std::size_t e = p[(j + 1) % len];
      const double delta =
          instance.d(a, c) + instance.d(b, e) - instance.d(a, b) - instance.d(c, e);
      if (delta < best_delta) {
        best_delta = delta;
        best_i = i;
        best_j = j;
        found = true;
      }
    }
  }
  return commit(instance, solution, kTwoOpt, before, timer, found, [&](TspSolution& s) {
    std::reverse(s.path.begin() + static_cast<std::ptrdiff_t>(best_i),
                 s.path.begin() + static_cast<std::ptrdiff_t>(best_j) + 1);
  });
}

TspInstance parse_tsplib(std::string_view text) {
  enum class Section { kHeader, kCoords, kWeights, kSkip };
  std::string name = "unnamed";
  std::optional<std::size_t> dimension;
  std::string weight_type;
  std::string weight_format;
  std::vector<std::pair<double, double>> coords;
  std::vector<bool> seen;
  std::vector<double> weights;
  std::size_t coords_read = 0;
  Section section = Section::kHeader;

  const auto lines = detail::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string line = detail::trim(lines[ln]);
    const std::size_t lineno = ln + 1;
    if (line.empty()) continue;
    if (line == "EOF") break;

    const std::string upper = detail::upper(line);
    if (upper.rfind("NODE_COORD_SECTION", 0) == 0) {
      if (!dimension) throw ParseError("NODE_COORD_SECTION before DIMENSION", lineno);
      coords.assign(*dimension, {0.0, 0.0});
      seen.assign(*dimension, false);
      section = Section::kCoords;
      continue;
    }
    if (upper.rfind("EDGE_WEIGHT_SECTION", 0) == 0) {
      if (!dimension) throw ParseError("EDGE_WEIGHT_SECTION before DIMENSION", lineno);
      section = Section::kWeights;
      continue;
    }
    if (upper.rfind("DISPLAY_DATA_SECTION", 0) == 0 || upper.rfind("TOUR_SECTION", 0) == 0 ||
        upper.rfind("FIXED_EDGES_SECTION", 0) == 0) {
      section = Section::kSkip;
      continue;
    }

    const auto colon = line.find(':');
    if (colon != std::string::npos && !std::isdigit(static_cast<unsigned char>(line[0])) &&
        line[0] != '-' && line[0] != '.') {
      const std::string key = detail::upper(detail::trim(line.substr(0, colon)));
      const std::string value = detail::trim(line.substr(colon + 1));
      section = Section::kHeader;
      if (key == "NAME") {
        name = value;
      } else if (key == "DIMENSION") {
        const auto v = detail::parse_number<long long>(value);
        if (!v || *v <= 0) throw ParseError("invalid DIMENSION '" + value + "'", lineno);
        dimension = static_cast<std::size_t>(*v);
      } else if (key == "EDGE_WEIGHT_TYPE") {
        weight_type = detail::upper(value);
        if (weight_type != "EUC_2D" && weight_type != "CEIL_2D" && weight_type != "EXPLICIT") {
          throw ParseError("unsupported EDGE_WEIGHT_TYPE '" + value + "'", lineno);
        }
      } else if (key == "EDGE_WEIGHT_FORMAT") {
        weight_format = detail::upper(value);
        if (weight_format != "FULL_MATRIX" && weight_format != "FUNCTION") {
          throw ParseError("unsupported EDGE_WEIGHT_FORMAT '" + value + "'", lineno);
        }
      }
      continue;
    }

    const auto tokens = detail::split_ws(line);
    switch (section) {
      case Section::kCoords: {
        if (tokens.size() < 3) throw ParseError("expected 'id x y'", lineno);
        const auto id = detail::parse_number<long long>(tokens[0]);
        const auto x = detail::parse_number<double>(tokens[1]);
        const auto y = detail::parse_number<double>(tokens[2]);
        if (!id || !x || !y) throw ParseError("malformed coordinate line", lineno);
        if (*id < 1 || static_cast<std::size_t>(*id) > *dimension) {
          throw ParseError("node id out of range", lineno);
        }
        const auto idx = static_cast<std::size_t>(*id - 1);
        if (seen[idx]) throw ParseError("duplicate node id", lineno);
        seen[idx] = true;
        coords[idx] = {*x, *y};
        ++coords_read;
        break;
      }
      case Section::kWeights:
        for (const auto& tok : tokens) {
          const auto v = detail::parse_number<double>(tok);
          if (!v) throw ParseError("malformed edge weight '" + tok + "'", lineno);
          weights.push_back(*v);
        }
        break;
      case Section::kSkip:
        break;
      case Section::kHeader:
        throw ParseError("unexpected line '" + line + "'", lineno);
    }
  }

  if (!dimension) throw ParseError("missing DIMENSION");
  if (weight_type.empty()) throw ParseError("missing EDGE_WEIGHT_TYPE");
  const std::size_t n = *dimension;

  if (weight_type == "EXPLICIT") {
    if (weight_format != "FULL_MATRIX") {
      throw ParseError("EXPLICIT weights require EDGE_WEIGHT_FORMAT FULL_MATRIX");
    }
    if (weights.size() != n * n) {
      throw ParseError(fmt::format("expected {} edge weights, found {}", n * n, weights.size()));
    }
    TspInstance inst = make_instance(std::move(weights), n, name);
    if (coords_read == n) inst.coords = std::move(coords);
    return inst;
  }

  if (coords_read != n) {
    throw ParseError(fmt::format("expected {} coordinates, found {}", n, coords_read));
  }
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = coords[i].first - coords[j].first;
      const double dy = coords[i].second - coords[j].second;
      const double e = std::sqrt(dx * dx + dy * dy);
      dist[i * n + j] = weight_type == "CEIL_2D" ? std::ceil(e) : std::floor(e + 0.5);
    }
  }
  TspInstance inst = make_instance(std::move(dist), n, name);
  inst.coords = std::move(coords);
  return inst;
}

TspInstance load_tsplib(const std::string& path) {
  TspInstance inst = parse_tsplib(detail::read_file(path));
  if (inst.name == "unnamed") inst.name = detail::stem(path);
  return inst;
}

GraphEncoding encode_state(const TspInstance& instance, const TspSolution& solution) {
  if (instance.coords.size() != instance.n) {
    throw EncodingError("TSP state encoding requires node coordinates");
  }
  const std::size_t n = instance.n;
  GraphEncoding g;
  g.vertex_count = n;
  g.vertex_attr_width = 2 + n;
  g.edge_attr_width = 2;
  g.vertex_attrs.resize(n * g.vertex_attr_width);

  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -min_x;
  double min_y = min_x;
  double max_y = -min_x;
  for (const auto& [x, y] : instance.coords) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  const double max_d = instance.max_distance();
  auto scaled = [](double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; };
  for (std::size_t v = 0; v < n; ++v) {
    double* row = &g.vertex_attrs[v * g.vertex_attr_width];
    row[0] = scaled(instance.coords[v].first, min_x, max_x);
    row[1] = scaled(instance.coords[v].second, min_y, max_y);
    for (std::size_t j = 0; j < n; ++j) {
      row[2 + j] = max_d > 0 ? instance.d(v, j) / max_d : 0.0;
    }
  }

  const auto& p = solution.path;
  const std::size_t len = p.size();
  if (len >= 2) {
    const double total = tour_length(instance, p);
    double clock = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t a = p[k];
      const std::size_t b = p[(k + 1) % len];
      const double arrival = clock + instance.d(a, b);
      g.edges.push_back({a, b, {total > 0 ? clock / total : 0.0, total > 0 ? arrival / total : 0.0}});
      clock = arrival;
    }
  }
  return g;
}

TspModel::TspModel(std::shared_ptr<const TspInstance> instance)
    : instance_(std::move(instance)),
      current_(TspSolution::empty(instance_->n)),
      best_(current_) {}

std::string_view TspModel::operator_name(OperatorId op) const {
  switch (op) {
    case kInsert: return "insert";
    case kMove: return "move";
    case kTwoOpt: return "2-opt";
    default: throw std::out_of_range("TSP operator id out of range");
  }
}

void TspModel::restart(Rng& /*rng*/) { current_ = TspSolution::empty(instance_->n); }

ObjectiveValue TspModel::objective() const { return tsp::objective(*instance_, current_); }

MoveOutcome TspModel::apply_operator(OperatorId op) {
  switch (op) {
    case kInsert: return op_insert(*instance_, current_);
    case kMove: return op_move_node(*instance_, current_);
    case kTwoOpt: return op_two_opt(*instance_, current_);
    default: throw std::out_of_range("TSP operator id out of range");
  }
}

void TspModel::keep_current_as_best() { best_ = current_; }

ObjectiveValue TspModel::best_objective() const { return tsp::objective(*instance_, best_); }

std::string TspModel::describe_best() const {
  return fmt::format("path={} unrouted={}", fmt::join(best_.path, ","),
                     fmt::join(best_.unrouted, ","));
}

StateEncoding TspModel::encode_state() const { return tsp::encode_state(*instance_, current_); }

EncodingSchema TspModel::encoding_schema() const {
  EncodingSchema s;
  s.is_graph = true;
  s.vertex_count = instance_->n;
  s.vertex_attr_width = 2 + instance_->n;
  s.edge_attr_width = 2;
  return s;
}

}  // namespace nbsel::tsp
