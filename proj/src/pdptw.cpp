#include "nbsel/pdptw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "text_util.hpp"

namespace nbsel::pdptw {

PdptwInstance build_instance(std::string name, std::size_t vehicle_count, double capacity,
                             double speed, std::vector<Location> locations) {
  if (locations.empty()) throw ValidationError("instance has no depot");
  if (vehicle_count == 0) throw ValidationError("vehicle count must be positive");
  if (!(capacity > 0)) throw ValidationError("capacity must be positive");
  if (!(speed > 0)) throw ValidationError("speed must be positive");

  PdptwInstance inst;
  inst.name = std::move(name);
  inst.vehicle_count = vehicle_count;
  inst.capacity = capacity;
  inst.speed = speed;
  inst.locations = std::move(locations);

  const std::size_t n = inst.locations.size();
  inst.request_of.assign(n, -1);
  for (std::size_t i = 1; i < n; ++i) {
    const Location& loc = inst.locations[i];
    const bool pickup = loc.delivery_partner != 0;
    const bool delivery = loc.pickup_partner != 0;
    if (pickup == delivery) {
      throw ValidationError(fmt::format("location {} must have exactly one partner", i));
    }
    if (pickup) {
      const std::size_t d = loc.delivery_partner;
      if (d >= n || inst.locations[d].pickup_partner != i) {
        throw ValidationError(fmt::format("pickup {} references unmatched delivery {}", i, d));
      }
      if (loc.demand < 0 || loc.demand + inst.locations[d].demand != 0.0) {
        throw ValidationError(fmt::format("request {}->{} load deltas do not cancel", i, d));
      }
      inst.request_of[i] = static_cast<long>(inst.pickup_of.size());
      inst.request_of[d] = static_cast<long>(inst.pickup_of.size());
      inst.pickup_of.push_back(i);
      inst.delivery_of.push_back(d);
    } else {
      const std::size_t p = loc.pickup_partner;
      if (p >= n || inst.locations[p].delivery_partner != i) {
        throw ValidationError(fmt::format("delivery {} references unmatched pickup {}", i, p));
      }
    }
  }

  inst.travel.assign(n * n, 0.0);
  double max_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = inst.locations[i].x - inst.locations[j].x;
      const double dy = inst.locations[i].y - inst.locations[j].y;
      inst.travel[i * n + j] = std::sqrt(dx * dx + dy * dy);
      max_d = std::max(max_d, inst.travel[i * n + j]);
    }
  }
  // A route set has at most (N - 1) + min(|V|, N - 1) legs.
  const double legs = static_cast<double>((n - 1) + std::min(vehicle_count, n - 1));
  inst.event_penalty = legs * max_d + 1.0;
  return inst;
}

PdptwSolution PdptwSolution::empty(const PdptwInstance& instance) {
  PdptwSolution s;
  s.routes.resize(instance.vehicle_count);
  s.unrouted.resize(instance.request_count());
  std::iota(s.unrouted.begin(), s.unrouted.end(), std::size_t{0});
  return s;
}

RouteStats simulate_route(const PdptwInstance& instance, std::span<const std::size_t> route) {
  thread_local std::vector<unsigned> seen_stamp;
  thread_local unsigned stamp = 0;
  if (seen_stamp.size() < instance.size()) seen_stamp.assign(instance.size(), 0);
  if (++stamp == 0) {
    std::fill(seen_stamp.begin(), seen_stamp.end(), 0);
    stamp = 1;
  }

  RouteStats st;
  if (route.empty()) return st;
  const auto& depot = instance.locations[0];
  double time = depot.earliest;
  double load = 0.0;
  std::size_t prev = 0;
  for (std::size_t loc : route) {
    const Location& l = instance.locations[loc];
    st.cost += instance.dist(prev, loc);
    const double arrival = time + instance.travel_time(prev, loc);
    if (arrival > l.latest) ++st.time_window;
    time = std::max(arrival, l.earliest) + l.service;
    load += l.demand;
    if (load > instance.capacity) ++st.capacity;
    if (l.pickup_partner != 0 && seen_stamp[l.pickup_partner] != stamp) ++st.precedence;
    seen_stamp[loc] = stamp;
    prev = loc;
  }
  st.cost += instance.dist(prev, 0);
  if (time + instance.travel_time(prev, 0) > depot.latest) ++st.time_window;
  return st;
}

ObjectiveValue objective(const PdptwInstance& instance, const PdptwSolution& solution) {
  double cost = 0.0;
  std::size_t events = 0;
  for (const auto& route : solution.routes) {
    const RouteStats st = simulate_route(instance, route);
    cost += st.cost;
    events += st.events();
  }
  return {cost, static_cast<double>(solution.unrouted.size()) * instance.unrouted_penalty() +
                    static_cast<double>(events) * instance.violation_unit()};
}

namespace {

struct Position {
  std::size_t route = 0;
  std::size_t index = 0;
  bool routed = false;
};

std::vector<Position> locate(const PdptwInstance& instance, const PdptwSolution& solution) {
  std::vector<Position> pos(instance.size());
  for (std::size_t v = 0; v < solution.routes.size(); ++v) {
    for (std::size_t k = 0; k < solution.routes[v].size(); ++k) {
      pos[solution.routes[v][k]] = {v, k, true};
    }
  }
  return pos;
}

// Shared bookkeeping for best-improving scans.
class Scan {
 public:
  Scan(const PdptwInstance& instance, const PdptwSolution& solution)
      : instance_(instance), before_(objective(instance, solution)) {
    route_value_.reserve(solution.routes.size());
    for (const auto& r : solution.routes) route_value_.push_back(value(r));
    best_delta_ = -improvement_threshold(before_.total());
  }

  [[nodiscard]] double value(std::span<const std::size_t> route) const {
    const RouteStats st = simulate_route(instance_, route);
    return st.cost + instance_.violation_unit() * static_cast<double>(st.events());
  }
  [[nodiscard]] double route_value(std::size_t v) const { return route_value_[v]; }
  [[nodiscard]] const ObjectiveValue& before() const { return before_; }

  bool offer(double delta) {
    if (delta < best_delta_) {
      best_delta_ = delta;
      found_ = true;
      return true;
    }
    return false;
  }
  [[nodiscard]] bool found() const { return found_; }

 private:
  const PdptwInstance& instance_;
  ObjectiveValue before_;
  std::vector<double> route_value_;
  double best_delta_ = 0.0;
  bool found_ = false;
};

template <class Apply>
MoveOutcome commit(const PdptwInstance& instance, PdptwSolution& solution, OperatorId op,
                   const Scan& scan, const MoveTimer& timer, Apply&& apply) {
  MoveOutcome out{op, false, scan.before(), scan.before(), 0.0};
  if (scan.found()) {
    PdptwSolution next = solution;
    apply(next);
    const ObjectiveValue after = objective(instance, next);
    if (after.total() < scan.before().total()) {
      solution = std::move(next);
      out.found_improving = true;
      out.after = after;
    }
  }
  out.elapsed_seconds = timer.seconds();
  return out;
}

// route[0:i) + a + route[i:j-1) + b + route[j-1:)  with i < j <= size + 1
void insert_two(const std::vector<std::size_t>& route, std::size_t a, std::size_t i,
                std::size_t b, std::size_t j, std::vector<std::size_t>& out) {
  out.clear();
  out.insert(out.end(), route.begin(), route.begin() + static_cast<std::ptrdiff_t>(i));
  out.push_back(a);
  out.insert(out.end(), route.begin() + static_cast<std::ptrdiff_t>(i),
             route.begin() + static_cast<std::ptrdiff_t>(j - 1));
  out.push_back(b);
  out.insert(out.end(), route.begin() + static_cast<std::ptrdiff_t>(j - 1), route.end());
}

void insert_one(const std::vector<std::size_t>& route, std::size_t a, std::size_t k,
                std::vector<std::size_t>& out) {
  out.assign(route.begin(), route.end());
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(k), a);
}

std::vector<std::size_t> without(const std::vector<std::size_t>& route, std::size_t a,
                                 std::size_t b = std::numeric_limits<std::size_t>::max()) {
  std::vector<std::size_t> out;
  out.reserve(route.size());
  for (std::size_t x : route) {
    if (x != a && x != b) out.push_back(x);
  }
  return out;
}

}  // namespace

MoveOutcome op_insert_pair(const PdptwInstance& instance, PdptwSolution& solution) {
  const MoveTimer timer;
  Scan scan(instance, solution);
  std::size_t best_r = 0, best_v = 0, best_i = 0, best_j = 0;
  std::vector<std::size_t> cand;
  for (std::size_t r : solution.unrouted) {
    const std::size_t p = instance.pickup_of[r];
    const std::size_t d = instance.delivery_of[r];
    bool empty_seen = false;
    for (std::size_t v = 0; v < solution.routes.size(); ++v) {
      const auto& route = solution.routes[v];
      // Empty routes are interchangeable; only the first can win a tie.
      if (route.empty()) {
        if (empty_seen) continue;
        empty_seen = true;
      }
      const std::size_t len = route.size();
      for (std::size_t i = 0; i <= len; ++i) {
        for (std::size_t j = i + 1; j <= len + 1; ++j) {
          insert_two(route, p, i, d, j, cand);
          const double delta =
              scan.value(cand) - scan.route_value(v) - instance.unrouted_penalty();
          if (scan.offer(delta)) {
            best_r = r, best_v = v, best_i = i, best_j = j;
          }
        }
      }
    }
  }
  return commit(instance, solution, kInsertPair, scan, timer, [&](PdptwSolution& s) {
    std::vector<std::size_t> out;
    insert_two(s.routes[best_v], instance.pickup_of[best_r], best_i,
               instance.delivery_of[best_r], best_j, out);
    s.routes[best_v] = std::move(out);
    s.unrouted.erase(std::find(s.unrouted.begin(), s.unrouted.end(), best_r));
  });
}

MoveOutcome op_move_node(const PdptwInstance& instance, PdptwSolution& solution) {
  const MoveTimer timer;
  Scan scan(instance, solution);
  const auto pos = locate(instance, solution);
  std::size_t best_loc = 0, best_v = 0, best_k = 0;
  std::vector<std::size_t> cand;
  for (std::size_t loc = 1; loc < instance.size(); ++loc) {
    if (!pos[loc].routed) continue;
    const std::size_t v0 = pos[loc].route;
    const std::size_t i0 = pos[loc].index;
    const auto src_removed = without(solution.routes[v0], loc);
    const double src_removed_value = scan.value(src_removed);
    bool empty_seen = false;
    for (std::size_t v = 0; v < solution.routes.size(); ++v) {
      const auto& base = v == v0 ? src_removed : solution.routes[v];
      if (v != v0 && base.empty()) {
        if (empty_seen) continue;
        empty_seen = true;
      }
      for (std::size_t k = 0; k <= base.size(); ++k) {
        if (v == v0 && k == i0) continue;
        insert_one(base, loc, k, cand);
        const double delta =
            v == v0 ? scan.value(cand) - scan.route_value(v0)
                    : scan.value(cand) + src_removed_value - scan.route_value(v0) -
                          scan.route_value(v);
        if (scan.offer(delta)) {
          best_loc = loc, best_v = v, best_k = k;
        }
      }
    }
  }
  return commit(instance, solution, kMoveNode, scan, timer, [&](PdptwSolution& s) {
    const std::size_t v0 = pos[best_loc].route;
    s.routes[v0] = without(s.routes[v0], best_loc);
    std::vector<std::size_t> out;
    insert_one(s.routes[best_v], best_loc, best_k, out);
    s.routes[best_v] = std::move(out);
  });
}

MoveOutcome op_move_pair(const PdptwInstance& instance, PdptwSolution& solution) {
  const MoveTimer timer;
  Scan scan(instance, solution);
  const auto pos = locate(instance, solution);
  std::size_t best_r = 0, best_v = 0, best_i = 0, best_j = 0;
  std::vector<std::size_t> cand;
  for (std::size_t r = 0; r < instance.request_count(); ++r) {
    const std::size_t p = instance.pickup_of[r];
    const std::size_t d = instance.delivery_of[r];
    if (!pos[p].routed || !pos[d].routed) continue;
    const std::size_t vp = pos[p].route;
    const std::size_t vd = pos[d].route;
    const auto removed_p = without(solution.routes[vp], p, d);
    const auto removed_d = vd == vp ? removed_p : without(solution.routes[vd], p, d);
    const double removed_p_value = scan.value(removed_p);
    const double removed_d_value = vd == vp ? 0.0 : scan.value(removed_d);
    const double old_sources = scan.route_value(vp) + (vd == vp ? 0.0 : scan.route_value(vd));
    bool empty_seen = false;
    for (std::size_t v = 0; v < solution.routes.size(); ++v) {
      const bool source = v == vp || v == vd;
      const auto& base = v == vp ? removed_p : v == vd ? removed_d : solution.routes[v];
      if (!source && base.empty()) {
        if (empty_seen) continue;
        empty_seen = true;
      }
      // Value of untouched-by-insertion source routes after removal.
      double others = 0.0;
      if (v != vp) others += removed_p_value;
      if (vd != vp && v != vd) others += removed_d_value;
      const double old_total = old_sources + (source ? 0.0 : scan.route_value(v));
      const std::size_t len = base.size();
      for (std::size_t i = 0; i <= len; ++i) {
        for (std::size_t j = i + 1; j <= len + 1; ++j) {
          insert_two(base, p, i, d, j, cand);
          const double delta = scan.value(cand) + others - old_total;
          if (scan.offer(delta)) {
            best_r = r, best_v = v, best_i = i, best_j = j;
          }
        }
      }
    }
  }
  return commit(instance, solution, kMovePair, scan, timer, [&](PdptwSolution& s) {
    const std::size_t p = instance.pickup_of[best_r];
    const std::size_t d = instance.delivery_of[best_r];
    s.routes[pos[p].route] = without(s.routes[pos[p].route], p, d);
    s.routes[pos[d].route] = without(s.routes[pos[d].route], p, d);
    std::vector<std::size_t> out;
    insert_two(s.routes[best_v], p, best_i, d, best_j, out);
    s.routes[best_v] = std::move(out);
  });
}

namespace {

void splice(const std::vector<std::size_t>& host, std::size_t cut, std::size_t cut_len,
            const std::vector<std::size_t>& donor, std::size_t take, std::size_t take_len,
            std::vector<std::size_t>& out) {
  out.clear();
  out.insert(out.end(), host.begin(), host.begin() + static_cast<std::ptrdiff_t>(cut));
  out.insert(out.end(), donor.begin() + static_cast<std::ptrdiff_t>(take),
             donor.begin() + static_cast<std::ptrdiff_t>(take + take_len));
  out.insert(out.end(), host.begin() + static_cast<std::ptrdiff_t>(cut + cut_len), host.end());
}

}  // namespace

MoveOutcome op_exchange_segments(const PdptwInstance& instance, PdptwSolution& solution) {
  const MoveTimer timer;
  Scan scan(instance, solution);
  std::size_t best_a = 0, best_b = 0, best_i1 = 0, best_l1 = 0, best_i2 = 0, best_l2 = 0;
  std::vector<std::size_t> new_a;
  std::vector<std::size_t> new_b;
  const auto& routes = solution.routes;
  for (std::size_t a = 0; a < routes.size(); ++a) {
    if (routes[a].empty()) continue;
    for (std::size_t b = a + 1; b < routes.size(); ++b) {
      if (routes[b].empty()) continue;
      const double old_value = scan.route_value(a) + scan.route_value(b);
      const std::size_t la = routes[a].size();
      const std::size_t lb = routes[b].size();
      for (std::size_t i1 = 0; i1 < la; ++i1) {
        for (std::size_t l1 = 1; l1 <= std::min(kMaxSegmentLength, la - i1); ++l1) {
          for (std::size_t i2 = 0; i2 < lb; ++i2) {
            for (std::size_t l2 = 1; l2 <= std::min(kMaxSegmentLength, lb - i2); ++l2) {
              splice(routes[a], i1, l1, routes[b], i2, l2, new_a);
              splice(routes[b], i2, l2, routes[a], i1, l1, new_b);
              const double delta = scan.value(new_a) + scan.value(new_b) - old_value;
              if (scan.offer(delta)) {
                best_a = a, best_b = b, best_i1 = i1, best_l1 = l1, best_i2 = i2, best_l2 = l2;
              }
            }
          }
        }
      }
    }
  }
  return commit(instance, solution, kExchangeSegments, scan, timer, [&](PdptwSolution& s) {
    std::vector<std::size_t> ra, rb;
    splice(s.routes[best_a], best_i1, best_l1, s.routes[best_b], best_i2, best_l2, ra);
    splice(s.routes[best_b], best_i2, best_l2, s.routes[best_a], best_i1, best_l1, rb);
    s.routes[best_a] = std::move(ra);
    s.routes[best_b] = std::move(rb);
  });
}

PdptwInstance parse_lilim(std::string_view text, std::string name) {
  const auto lines = detail::split_lines(text);
  bool have_header = false;
  std::size_t vehicles = 0;
  double capacity = 0.0;
  double speed = 1.0;
  std::vector<Location> locs;
  std::vector<bool> seen;
  std::size_t header_line = 0;

  struct Row {
    std::size_t id;
    Location loc;
    std::size_t line;
  };
  std::vector<Row> rows;

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto tokens = detail::split_ws(lines[ln]);
    if (tokens.empty()) continue;
    const std::size_t lineno = ln + 1;
    if (!have_header) {
      if (tokens.size() < 2) throw ParseError("header needs vehicle count and capacity", lineno);
      const auto k = detail::parse_number<double>(tokens[0]);
      const auto q = detail::parse_number<double>(tokens[1]);
      const auto s = tokens.size() > 2 ? detail::parse_number<double>(tokens[2])
                                       : std::optional<double>(1.0);
      if (!k || !q || !s || *k < 1 || *k != std::floor(*k)) {
        throw ParseError("malformed header", lineno);
      }
      vehicles = static_cast<std::size_t>(*k);
      capacity = *q;
      speed = *s;
      have_header = true;
      header_line = lineno;
      continue;
    }
    if (tokens.size() != 9) {
      throw ParseError(fmt::format("expected 9 fields, found {}", tokens.size()), lineno);
    }
    std::array<double, 9> f{};
    for (std::size_t i = 0; i < 9; ++i) {
      const auto v = detail::parse_number<double>(tokens[i]);
      if (!v) throw ParseError("non-numeric field '" + tokens[i] + "'", lineno);
      f[i] = *v;
    }
    for (std::size_t i : {0u, 7u, 8u}) {
      if (f[i] < 0 || f[i] != std::floor(f[i])) {
        throw ParseError("location and partner ids must be non-negative integers", lineno);
      }
    }
    Location loc;
    loc.x = f[1];
    loc.y = f[2];
    loc.demand = f[3];
    loc.earliest = f[4];
    loc.latest = f[5];
    loc.service = f[6];
    loc.pickup_partner = static_cast<std::size_t>(f[7]);
    loc.delivery_partner = static_cast<std::size_t>(f[8]);
    rows.push_back({static_cast<std::size_t>(f[0]), loc, lineno});
  }
  if (!have_header) throw ParseError("empty instance");
  if (rows.empty()) throw ParseError("no locations after header", header_line);

  locs.resize(rows.size());
  seen.assign(rows.size(), false);
  for (const Row& r : rows) {
    if (r.id >= rows.size()) throw ParseError("location id out of range", r.line);
    if (seen[r.id]) throw ParseError("duplicate location id", r.line);
    seen[r.id] = true;
    locs[r.id] = r.loc;
  }
  // Partner columns are ignored on the depot.
  locs[0].pickup_partner = 0;
  locs[0].delivery_partner = 0;
  return build_instance(std::move(name), vehicles, capacity, speed, std::move(locs));
}

PdptwInstance load_lilim(const std::string& path) {
  return parse_lilim(detail::read_file(path), detail::stem(path));
}

GraphEncoding encode_state(const PdptwInstance& instance, const PdptwSolution& solution) {
  const std::size_t n = instance.size();
  GraphEncoding g;
  g.vertex_count = n;
  g.vertex_attr_width = kExtraVertexAttrs + n;
  g.edge_attr_width = 3;
  g.vertex_attrs.assign(n * g.vertex_attr_width, 0.0);

  auto column = [&](auto getter) {
    std::vector<double> col(n);
    for (std::size_t v = 0; v < n; ++v) col[v] = getter(v);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const double a = *lo;
    const double b = *hi;
    for (double& x : col) x = b > a ? (x - a) / (b - a) : 0.0;
    return col;
  };
  const auto& L = instance.locations;
  const std::array<std::vector<double>, kExtraVertexAttrs> cols = {
      column([&](std::size_t v) { return L[v].x; }),
      column([&](std::size_t v) { return L[v].y; }),
      column([&](std::size_t v) { return L[v].earliest; }),
      column([&](std::size_t v) { return L[v].latest; }),
      column([&](std::size_t v) { return L[v].service; }),
      column([&](std::size_t v) { return L[v].demand; }),
      column([&](std::size_t v) { return static_cast<double>(instance.request_of[v] + 1); }),
  };
  double max_d = 0.0;
  for (double t : instance.travel) max_d = std::max(max_d, t);
  for (std::size_t v = 0; v < n; ++v) {
    double* row = &g.vertex_attrs[v * g.vertex_attr_width];
    for (std::size_t k = 0; k < kExtraVertexAttrs; ++k) row[k] = cols[k][v];
    for (std::size_t j = 0; j < n; ++j) {
      row[kExtraVertexAttrs + j] = max_d > 0 ? instance.dist(v, j) / max_d : 0.0;
    }
  }

  // Forward simulation: (src, dst, departure, arrival, load in transit).
  struct Leg {
    std::size_t src, dst;
    double dep, arr, load;
  };
  std::vector<Leg> legs;
  for (const auto& route : solution.routes) {
    if (route.empty()) continue;
    double time = L[0].earliest;
    double load = 0.0;
    std::size_t prev = 0;
    for (std::size_t k = 0; k <= route.size(); ++k) {
      const std::size_t next = k < route.size() ? route[k] : 0;
      const double arr = time + instance.travel_time(prev, next);
      legs.push_back({prev, next, time, arr, load});
      if (next != 0) {
        time = std::max(arr, L[next].earliest) + L[next].service;
        load += L[next].demand;
      }
      prev = next;
    }
  }
  double horizon = L[0].latest;
  double load_lo = 0.0;
  double load_hi = instance.capacity;
  for (const Leg& leg : legs) {
    horizon = std::max(horizon, leg.arr);
    load_lo = std::min(load_lo, leg.load);
    load_hi = std::max(load_hi, leg.load);
  }
  for (const Leg& leg : legs) {
    g.edges.push_back({leg.src, leg.dst,
                       {horizon > 0 ? leg.dep / horizon : 0.0, horizon > 0 ? leg.arr / horizon : 0.0,
                        load_hi > load_lo ? (leg.load - load_lo) / (load_hi - load_lo) : 0.0}});
  }
  return g;
}

PdptwModel::PdptwModel(std::shared_ptr<const PdptwInstance> instance)
    : instance_(std::move(instance)),
      current_(PdptwSolution::empty(*instance_)),
      best_(current_) {}

std::string_view PdptwModel::operator_name(OperatorId op) const {
  switch (op) {
    case kInsertPair: return "insert-pair";
    case kMoveNode: return "move-node";
    case kMovePair: return "move-pair";
    case kExchangeSegments: return "exchange-segments";
    default: throw std::out_of_range("PDPTW operator id out of range");
  }
}

void PdptwModel::restart(Rng& /*rng*/) { current_ = PdptwSolution::empty(*instance_); }

ObjectiveValue PdptwModel::objective() const { return pdptw::objective(*instance_, current_); }

MoveOutcome PdptwModel::apply_operator(OperatorId op) {
  switch (op) {
    case kInsertPair: return op_insert_pair(*instance_, current_);
    case kMoveNode: return op_move_node(*instance_, current_);
    case kMovePair: return op_move_pair(*instance_, current_);
    case kExchangeSegments: return op_exchange_segments(*instance_, current_);
    default: throw std::out_of_range("PDPTW operator id out of range");
  }
}

void PdptwModel::keep_current_as_best() { best_ = current_; }

ObjectiveValue PdptwModel::best_objective() const { return pdptw::objective(*instance_, best_); }

std::string PdptwModel::describe_best() const {
  std::string out;
  for (std::size_t v = 0; v < best_.routes.size(); ++v) {
    if (best_.routes[v].empty()) continue;
    out += fmt::format("v{}: {}\n", v, fmt::join(best_.routes[v], " "));
  }
  out += fmt::format("unrouted: {}\n", fmt::join(best_.unrouted, " "));
  return out;
}

StateEncoding PdptwModel::encode_state() const { return pdptw::encode_state(*instance_, current_); }

EncodingSchema PdptwModel::encoding_schema() const {
  EncodingSchema s;
  s.is_graph = true;
  s.vertex_count = instance_->size();
  s.vertex_attr_width = kExtraVertexAttrs + instance_->size();
  s.edge_attr_width = 3;
  return s;
}

}  // namespace nbsel::pdptw
