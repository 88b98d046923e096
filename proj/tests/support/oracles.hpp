#pragma once

// Brute-force reference evaluators. Deliberately written without reusing
// any library evaluation code: they only read raw instance data.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "nbsel/csp.hpp"
#include "nbsel/pdptw.hpp"
#include "nbsel/tsp.hpp"

namespace oracle {

struct Value {
  double cost = 0.0;
  double violation = 0.0;
  [[nodiscard]] double total() const { return cost + violation; }
};

// ---- TSP ----

inline double tsp_max_distance(const nbsel::tsp::TspInstance& in) {
  double m = 0.0;
  for (std::size_t i = 0; i < in.n; ++i) {
    for (std::size_t j = 0; j < in.n; ++j) m = std::max(m, in.distances[i * in.n + j]);
  }
  return m;
}

inline Value tsp_value(const nbsel::tsp::TspInstance& in, const std::vector<std::size_t>& path) {
  Value v;
  const std::size_t len = path.size();
  if (len >= 2) {
    for (std::size_t k = 0; k + 1 < len; ++k) v.cost += in.distances[path[k] * in.n + path[k + 1]];
    v.cost += in.distances[path[len - 1] * in.n + path[0]];
  }
  const double penalty = static_cast<double>(in.n) * tsp_max_distance(in) + 1.0;
  v.violation = static_cast<double>(in.n - len) * penalty;
  return v;
}

inline std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& path) {
  std::vector<bool> used(n, false);
  for (auto c : path) used[c] = true;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < n; ++c) {
    if (!used[c]) out.push_back(c);
  }
  return out;
}

/// Every path reachable by one application of the operator.
inline std::vector<std::vector<std::size_t>> tsp_neighbors(const nbsel::tsp::TspInstance& in,
                                                           const std::vector<std::size_t>& path,
                                                           nbsel::OperatorId op) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t len = path.size();
  if (op == nbsel::tsp::kInsert) {
    for (std::size_t u : complement(in.n, path)) {
      for (std::size_t k = 0; k <= len; ++k) {
        auto p = path;
        p.insert(p.begin() + static_cast<long>(k), u);
        out.push_back(p);
      }
    }
  } else if (op == nbsel::tsp::kMove) {
    for (std::size_t i = 0; i < len; ++i) {
      auto reduced = path;
      reduced.erase(reduced.begin() + static_cast<long>(i));
      for (std::size_t k = 0; k <= reduced.size(); ++k) {
        if (k == i) continue;
        auto p = reduced;
        p.insert(p.begin() + static_cast<long>(k), path[i]);
        out.push_back(p);
      }
    }
  } else {
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = i + 1; j < len; ++j) {
        auto p = path;
        std::reverse(p.begin() + static_cast<long>(i), p.begin() + static_cast<long>(j) + 1);
        out.push_back(p);
      }
    }
  }
  return out;
}

/// Optimal closed tour length by dynamic programming over subsets.
inline double held_karp(const nbsel::tsp::TspInstance& in) {
  const std::size_t n = in.n;
  if (n <= 1) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t full = std::size_t{1} << (n - 1);
  // dp[mask][j]: shortest path from city 0 through `mask` (cities 1..n-1) ending at j.
  std::vector<double> dp(full * n, inf);
  for (std::size_t j = 1; j < n; ++j) dp[(std::size_t{1} << (j - 1)) * n + j] = in.d(0, j);
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (std::size_t j = 1; j < n; ++j) {
      const double cur = dp[mask * n + j];
      if (cur == inf || !(mask & (std::size_t{1} << (j - 1)))) continue;
      for (std::size_t k = 1; k < n; ++k) {
        const std::size_t bit = std::size_t{1} << (k - 1);
        if (mask & bit) continue;
        double& slot = dp[(mask | bit) * n + k];
        slot = std::min(slot, cur + in.d(j, k));
      }
    }
  }
  double best = inf;
  for (std::size_t j = 1; j < n; ++j) best = std::min(best, dp[(full - 1) * n + j] + in.d(j, 0));
  return best;
}

// ---- PDPTW ----

struct PdptwEvents {
  double cost = 0.0;
  std::size_t events = 0;
};

inline double pdptw_distance(const nbsel::pdptw::PdptwInstance& in, std::size_t a, std::size_t b) {
  const double dx = in.locations[a].x - in.locations[b].x;
  const double dy = in.locations[a].y - in.locations[b].y;
  return std::sqrt(dx * dx + dy * dy);
}

inline PdptwEvents pdptw_route(const nbsel::pdptw::PdptwInstance& in,
                               const std::vector<std::size_t>& route) {
  PdptwEvents ev;
  if (route.empty()) return ev;
  const auto& L = in.locations;
  double clock = L[0].earliest;
  double load = 0.0;
  std::set<std::size_t> visited;
  std::size_t at = 0;
  for (std::size_t next : route) {
    const double leg = pdptw_distance(in, at, next);
    ev.cost += leg;
    const double arrive = clock + leg / in.speed;
    if (arrive > L[next].latest) ev.events += 1;
    clock = (arrive < L[next].earliest ? L[next].earliest : arrive) + L[next].service;
    load += L[next].demand;
    if (load > in.capacity) ev.events += 1;
    const bool is_delivery = L[next].pickup_partner != 0;
    if (is_delivery && !visited.count(L[next].pickup_partner)) ev.events += 1;
    visited.insert(next);
    at = next;
  }
  const double back = pdptw_distance(in, at, 0);
  ev.cost += back;
  if (clock + back / in.speed > L[0].latest) ev.events += 1;
  return ev;
}

inline double pdptw_event_penalty(const nbsel::pdptw::PdptwInstance& in) {
  const std::size_t n = in.locations.size();
  double maxd = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) maxd = std::max(maxd, pdptw_distance(in, a, b));
  }
  const std::size_t legs = (n - 1) + std::min(in.vehicle_count, n - 1);
  return static_cast<double>(legs) * maxd + 1.0;
}

inline Value pdptw_value(const nbsel::pdptw::PdptwInstance& in,
                         const nbsel::pdptw::PdptwSolution& s) {
  Value v;
  std::size_t events = 0;
  for (const auto& r : s.routes) {
    const auto ev = pdptw_route(in, r);
    v.cost += ev.cost;
    events += ev.events;
  }
  const double pv = pdptw_event_penalty(in);
  v.violation = static_cast<double>(s.unrouted.size()) * (2.0 * pv) + static_cast<double>(events) * pv;
  return v;
}

inline std::vector<std::size_t> insert_at(std::vector<std::size_t> r, std::size_t k, std::size_t x) {
  r.insert(r.begin() + static_cast<long>(k), x);
  return r;
}

inline std::vector<std::size_t> erase_values(std::vector<std::size_t> r, std::size_t a,
                                             std::size_t b) {
  r.erase(std::remove_if(r.begin(), r.end(), [&](std::size_t x) { return x == a || x == b; }),
          r.end());
  return r;
}

inline std::vector<nbsel::pdptw::PdptwSolution> pdptw_neighbors(
    const nbsel::pdptw::PdptwInstance& in, const nbsel::pdptw::PdptwSolution& s,
    nbsel::OperatorId op) {
  using nbsel::pdptw::PdptwSolution;
  std::vector<PdptwSolution> out;
  const std::size_t V = s.routes.size();
  auto where = [&](std::size_t loc, std::size_t& route, std::size_t& idx) {
    for (std::size_t v = 0; v < V; ++v) {
      for (std::size_t k = 0; k < s.routes[v].size(); ++k) {
        if (s.routes[v][k] == loc) {
          route = v, idx = k;
          return true;
        }
      }
    }
    return false;
  };
  // All placements of p then d (p strictly earlier) into route `base`.
  auto place_pair = [&](const std::vector<std::size_t>& base, std::size_t p, std::size_t d) {
    std::vector<std::vector<std::size_t>> res;
    for (std::size_t i = 0; i <= base.size(); ++i) {
      const auto with_p = insert_at(base, i, p);
      for (std::size_t j = i + 1; j <= with_p.size(); ++j) res.push_back(insert_at(with_p, j, d));
    }
    return res;
  };

  if (op == nbsel::pdptw::kInsertPair) {
    for (std::size_t r : s.unrouted) {
      const std::size_t p = in.pickup_of[r], d = in.delivery_of[r];
      for (std::size_t v = 0; v < V; ++v) {
        for (auto& route : place_pair(s.routes[v], p, d)) {
          PdptwSolution n = s;
          n.routes[v] = route;
          n.unrouted.erase(std::find(n.unrouted.begin(), n.unrouted.end(), r));
          out.push_back(std::move(n));
        }
      }
    }
  } else if (op == nbsel::pdptw::kMoveNode) {
    for (std::size_t loc = 1; loc < in.locations.size(); ++loc) {
      std::size_t v0 = 0, i0 = 0;
      if (!where(loc, v0, i0)) continue;
      PdptwSolution base = s;
      base.routes[v0].erase(base.routes[v0].begin() + static_cast<long>(i0));
      for (std::size_t v = 0; v < V; ++v) {
        for (std::size_t k = 0; k <= base.routes[v].size(); ++k) {
          if (v == v0 && k == i0) continue;
          PdptwSolution n = base;
          n.routes[v] = insert_at(n.routes[v], k, loc);
          out.push_back(std::move(n));
        }
      }
    }
  } else if (op == nbsel::pdptw::kMovePair) {
    for (std::size_t r = 0; r < in.request_count(); ++r) {
      const std::size_t p = in.pickup_of[r], d = in.delivery_of[r];
      std::size_t vp = 0, ip = 0, vd = 0, id = 0;
      if (!where(p, vp, ip) || !where(d, vd, id)) continue;
      PdptwSolution base = s;
      for (auto& route : base.routes) route = erase_values(route, p, d);
      for (std::size_t v = 0; v < V; ++v) {
        for (auto& route : place_pair(base.routes[v], p, d)) {
          PdptwSolution n = base;
          n.routes[v] = route;
          out.push_back(std::move(n));
        }
      }
    }
  } else {
    const std::size_t cap = nbsel::pdptw::kMaxSegmentLength;
    for (std::size_t a = 0; a < V; ++a) {
      for (std::size_t b = a + 1; b < V; ++b) {
        const auto& A = s.routes[a];
        const auto& B = s.routes[b];
        for (std::size_t i1 = 0; i1 < A.size(); ++i1) {
          for (std::size_t l1 = 1; l1 <= cap && i1 + l1 <= A.size(); ++l1) {
            for (std::size_t i2 = 0; i2 < B.size(); ++i2) {
              for (std::size_t l2 = 1; l2 <= cap && i2 + l2 <= B.size(); ++l2) {
                std::vector<std::size_t> na(A.begin(), A.begin() + static_cast<long>(i1));
                na.insert(na.end(), B.begin() + static_cast<long>(i2),
                          B.begin() + static_cast<long>(i2 + l2));
                na.insert(na.end(), A.begin() + static_cast<long>(i1 + l1), A.end());
                std::vector<std::size_t> nb(B.begin(), B.begin() + static_cast<long>(i2));
                nb.insert(nb.end(), A.begin() + static_cast<long>(i1),
                          A.begin() + static_cast<long>(i1 + l1));
                nb.insert(nb.end(), B.begin() + static_cast<long>(i2 + l2), B.end());
                PdptwSolution n = s;
                n.routes[a] = std::move(na);
                n.routes[b] = std::move(nb);
                out.push_back(std::move(n));
              }
            }
          }
        }
      }
    }
  }
  return out;
}

// ---- CSP ----

inline double csp_violation(const nbsel::csp::CspInstance& in, const std::vector<std::size_t>& seq) {
  double total = 0.0;
  const std::size_t n = seq.size();
  for (std::size_t o = 0; o < in.options.size(); ++o) {
    const std::size_t p = in.options[o].p;
    const std::size_t q = in.options[o].q;
    for (std::size_t start = 0; start + q <= n; ++start) {
      std::size_t count = 0;
      for (std::size_t k = start; k < start + q; ++k) {
        if (in.classes[seq[k]].options[o]) ++count;
      }
      if (count > p) total += static_cast<double>(count - p);
    }
  }
  return total;
}

inline std::vector<std::vector<std::size_t>> csp_neighbors(const nbsel::csp::CspInstance& in,
                                                           const std::vector<std::size_t>& seq,
                                                           nbsel::OperatorId op) {
  (void)in;
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = seq.size();
  const std::size_t cap = nbsel::csp::kMaxSubseqLength;
  if (op == nbsel::csp::kSwap) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto s = seq;
        std::swap(s[i], s[j]);
        out.push_back(s);
      }
    }
  } else if (op == nbsel::csp::kMoveCar) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        auto s = seq;
        const auto car = s[i];
        s.erase(s.begin() + static_cast<long>(i));
        s.insert(s.begin() + static_cast<long>(j), car);
        out.push_back(s);
      }
    }
  } else if (op == nbsel::csp::kFlipSubseq) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t len = 2; len <= cap && a + len <= n; ++len) {
        auto s = seq;
        std::reverse(s.begin() + static_cast<long>(a), s.begin() + static_cast<long>(a + len));
        out.push_back(s);
      }
    }
  } else {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t len = 1; len <= cap; ++len) {
        for (std::size_t b = a + len; b + len <= n; ++b) {
          auto s = seq;
          for (std::size_t k = 0; k < len; ++k) std::swap(s[a + k], s[b + k]);
          out.push_back(s);
        }
      }
    }
  }
  return out;
}

// ---- random instances ----

inline nbsel::tsp::TspInstance random_euclidean_tsp(std::size_t n, std::mt19937_64& rng,
                                                    double extent = 100.0) {
  std::uniform_real_distribution<double> coord(0.0, extent);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) p = {std::round(coord(rng)), std::round(coord(rng))};
  return nbsel::tsp::make_euclidean_instance(std::move(pts), "random");
}

inline nbsel::tsp::TspInstance random_matrix_tsp(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(1.0, 50.0);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = dist(rng);
  }
  return nbsel::tsp::make_instance(std::move(d), n, "random");
}

/// `requests` pairs, time windows drawn so that some but not all are tight.
inline nbsel::pdptw::PdptwInstance random_pdptw(std::size_t requests, std::size_t vehicles,
                                                std::mt19937_64& rng, double capacity = 15.0) {
  std::uniform_real_distribution<double> coord(0.0, 50.0);
  std::uniform_int_distribution<int> demand(1, 10);
  std::uniform_real_distribution<double> open(0.0, 60.0);
  std::uniform_real_distribution<double> width(20.0, 200.0);
  std::vector<nbsel::pdptw::Location> locs(1 + 2 * requests);
  locs[0] = {25.0, 25.0, 0.0, 0.0, 1000.0, 0.0, 0, 0};
  for (std::size_t r = 0; r < requests; ++r) {
    const std::size_t p = 1 + r;
    const std::size_t d = 1 + requests + r;
    const double q = demand(rng);
    const double e1 = open(rng);
    const double e2 = open(rng);
    locs[p] = {coord(rng), coord(rng), q, e1, e1 + width(rng), 2.0, 0, d};
    locs[d] = {coord(rng), coord(rng), -q, e2, e2 + width(rng), 2.0, p, 0};
  }
  return nbsel::pdptw::build_instance("random", vehicles, capacity, 1.0, std::move(locs));
}

/// Random structurally valid solution: each request unrouted or its two
/// locations dropped anywhere (possibly split, possibly out of order).
inline nbsel::pdptw::PdptwSolution random_pdptw_solution(const nbsel::pdptw::PdptwInstance& in,
                                                         std::mt19937_64& rng) {
  nbsel::pdptw::PdptwSolution s;
  s.routes.resize(in.vehicle_count);
  std::uniform_int_distribution<std::size_t> pick_route(0, in.vehicle_count - 1);
  std::bernoulli_distribution keep(0.7);
  for (std::size_t r = 0; r < in.request_count(); ++r) {
    if (!keep(rng)) {
      s.unrouted.push_back(r);
      continue;
    }
    for (std::size_t loc : {in.pickup_of[r], in.delivery_of[r]}) {
      auto& route = s.routes[pick_route(rng)];
      std::uniform_int_distribution<std::size_t> pos(0, route.size());
      route.insert(route.begin() + static_cast<long>(pos(rng)), loc);
    }
  }
  return s;
}

inline nbsel::csp::CspInstance random_csp(std::size_t n, std::size_t options,
                                          std::size_t classes, std::mt19937_64& rng) {
  std::vector<nbsel::csp::RatioConstraint> opts(options);
  std::uniform_int_distribution<std::size_t> qd(1, 5);
  for (auto& o : opts) {
    o.q = qd(rng);
    o.p = std::uniform_int_distribution<std::size_t>(1, o.q)(rng);
  }
  std::vector<nbsel::csp::CarClass> cls(classes);
  std::bernoulli_distribution bit(0.45);
  for (auto& c : cls) {
    c.options.resize(options);
    for (std::size_t o = 0; o < options; ++o) c.options[o] = bit(rng);
  }
  // Distribute n cars over the classes, at least one each when possible.
  std::uniform_int_distribution<std::size_t> which(0, classes - 1);
  for (std::size_t k = 0; k < n; ++k) cls[k < classes ? k : which(rng)].count += 1;
  return nbsel::csp::build_instance("random", std::move(opts), std::move(cls));
}

}  // namespace oracle
