#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "nbsel/pdptw.hpp"

using namespace nbsel;
using namespace nbsel::pdptw;

namespace {

// Depot at origin, pickup at (3,0), delivery at (3,4).
PdptwInstance one_request(double delivery_latest = 100.0, std::size_t vehicles = 1) {
  std::vector<Location> locs(3);
  locs[0] = {0, 0, 0, 0, 100, 0, 0, 0};
  locs[1] = {3, 0, 5, 0, 100, 1, 0, 2};
  locs[2] = {3, 4, -5, 0, delivery_latest, 1, 1, 0};
  return build_instance("one", vehicles, 10.0, 1.0, std::move(locs));
}

}  // namespace

TEST_CASE("pdptw objective on hand examples") {
  const auto in = one_request();
  PdptwSolution s;
  s.routes = {{1, 2}};
  const auto v = objective(in, s);
  CHECK(v.cost == doctest::Approx(3 + 4 + 5));
  CHECK(v.violation == 0.0);

  // Earliest arrival at the delivery: 3 + 1 (service) + 4 = 8.
  const auto late = one_request(7.5);
  const auto st = simulate_route(late, s.routes[0]);
  CHECK(st.time_window == 1);
  CHECK(st.capacity == 0);
  CHECK(st.precedence == 0);
  CHECK(objective(late, s).violation == late.violation_unit());

  const auto e = objective(in, PdptwSolution::empty(in));
  CHECK(e.cost == 0.0);
  CHECK(e.violation == in.unrouted_penalty());
  CHECK(in.unrouted_penalty() == 2 * in.violation_unit());
}

TEST_CASE("pdptw precedence and capacity events") {
  const auto in = one_request();
  PdptwSolution reversed;
  reversed.routes = {{2, 1}};
  const auto st = simulate_route(in, reversed.routes[0]);
  CHECK(st.precedence == 1);

  const auto split_in = one_request(100.0, 2);
  PdptwSolution split;
  split.routes = {{1}, {2}};
  CHECK(simulate_route(split_in, split.routes[1]).precedence == 1);
  CHECK(objective(split_in, split).violation == 1 * split_in.violation_unit());

  std::vector<Location> locs(3);
  locs[0] = {0, 0, 0, 0, 100, 0, 0, 0};
  locs[1] = {1, 0, 12, 0, 100, 0, 0, 2};
  locs[2] = {2, 0, -12, 0, 100, 0, 1, 0};
  const auto heavy = build_instance("heavy", 1, 10.0, 1.0, std::move(locs));
  CHECK(simulate_route(heavy, std::vector<std::size_t>{1, 2}).capacity == 1);
}

TEST_CASE("pdptw objective matches the reference simulator") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 300; ++rep) {
    const auto in = oracle::random_pdptw(1 + rep % 6, 1 + rep % 3, rng);
    const auto s = oracle::random_pdptw_solution(in, rng);
    const auto ref = oracle::pdptw_value(in, s);
    const auto got = objective(in, s);
    CHECK(got.cost == ref.cost);
    CHECK(got.violation == ref.violation);
  }
}

TEST_CASE("pdptw operators: trivial neighborhoods") {
  auto in = one_request();
  PdptwSolution routed;
  routed.routes = {{1, 2}};
  CHECK_FALSE(op_insert_pair(in, routed).found_improving);
  CHECK_FALSE(op_exchange_segments(in, routed).found_improving);

  auto s = PdptwSolution::empty(in);
  const auto out = op_insert_pair(in, s);
  REQUIRE(out.found_improving);
  CHECK(out.before.violation - out.after.violation == in.unrouted_penalty());
  CHECK(s.routes[0] == std::vector<std::size_t>{1, 2});
  CHECK(s.unrouted.empty());
}

TEST_CASE("pdptw operators match exhaustive neighborhood search") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    const auto in = oracle::random_pdptw(1 + rep % 4, 1 + rep % 3, rng);
    const auto start = oracle::random_pdptw_solution(in, rng);
    for (OperatorId op = 0; op < kOperatorCount; ++op) {
      auto s = start;
      const double before = oracle::pdptw_value(in, s).total();
      double best = before;
      for (const auto& cand : oracle::pdptw_neighbors(in, start, op)) {
        best = std::min(best, oracle::pdptw_value(in, cand).total());
      }
      MoveOutcome out;
      switch (op) {
        case kInsertPair: out = op_insert_pair(in, s); break;
        case kMoveNode: out = op_move_node(in, s); break;
        case kMovePair: out = op_move_pair(in, s); break;
        default: out = op_exchange_segments(in, s); break;
      }
      const bool expect = best < before - 1e-9 * std::max(1.0, before);
      CAPTURE(rep);
      CAPTURE(op);
      CHECK(out.found_improving == expect);
      if (expect) {
        CHECK(out.after.total() == doctest::Approx(best).epsilon(1e-12));
      } else {
        CHECK(s == start);
      }
      // Structural invariant: every location exactly once or its request unrouted.
      std::vector<int> seen(in.size(), 0);
      for (const auto& r : s.routes) {
        for (auto loc : r) seen[loc] += 1;
      }
      for (auto r : s.unrouted) {
        seen[in.pickup_of[r]] += 1;
        seen[in.delivery_of[r]] += 1;
      }
      for (std::size_t loc = 1; loc < in.size(); ++loc) CHECK(seen[loc] == 1);
    }
  }
}

TEST_CASE("li & lim parsing") {
  const auto in = load_lilim(fixture("lr3.txt"));
  CHECK(in.vehicle_count == 2);
  CHECK(in.capacity == 100.0);
  CHECK(in.request_count() == 3);
  CHECK(in.pickup_of == std::vector<std::size_t>{1, 2, 3});
  CHECK(in.delivery_of == std::vector<std::size_t>{4, 5, 6});
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(in.locations[in.pickup_of[r]].demand > 0);
    CHECK(in.locations[in.delivery_of[r]].demand < 0);
  }

  const auto minimal = parse_lilim("25\t200\t1\n0 0 0 0 0 100 0 0 0\n1 1 1 4 0 50 2 0 2\n2 2 2 -4 0 60 2 1 0\n");
  CHECK(minimal.vehicle_count == 25);
  CHECK(minimal.capacity == 200.0);
  CHECK(minimal.locations[1].delivery_partner == 2);
  CHECK(minimal.locations[2].pickup_partner == 1);

  try {
    (void)parse_lilim("2 10 1\n0 0 0 0 0 100 0 0 0\n1 1 1 4 0 50\n");
    FAIL("short line accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_lilim("2 10 1\n0 0 0 0 0 100 0 0 0\n1 1 1 4 0 50 2 0 2\n2 2 2 -4 0 60 2 0 0\n"),
                  ValidationError);
}

TEST_CASE("pdptw state encoding") {
  const auto in = one_request();
  const auto g0 = encode_state(in, PdptwSolution::empty(in));
  CHECK(g0.vertex_count == 3);
  CHECK(g0.edges.empty());
  CHECK(g0.vertex_attr_width == kExtraVertexAttrs + 3);

  PdptwSolution s;
  s.routes = {{1, 2}};
  const auto g = encode_state(in, s);
  REQUIRE(g.edges.size() == 3);
  CHECK(g.edges[0].src == 0);
  CHECK(g.edges[2].dst == 0);
  CHECK(g.edges[0].attrs[0] < g.edges[1].attrs[0]);
  CHECK(g.edges[1].attrs[0] < g.edges[2].attrs[0]);

  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = oracle::random_pdptw(4, 2, rng);
    const auto sol = oracle::random_pdptw_solution(inst, rng);
    const auto enc = encode_state(inst, sol);
    for (double a : enc.vertex_attrs) {
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
    }
    for (const auto& e : enc.edges) {
      for (double a : e.attrs) {
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
      }
    }
  }
}
