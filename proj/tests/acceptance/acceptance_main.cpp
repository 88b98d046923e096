// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "../support/report_fixtures.hpp"
#include "nbsel/batch.hpp"
#include "nbsel/bridge.hpp"
#include "nbsel/csp.hpp"
#include "nbsel/engine.hpp"
#include "nbsel/pdptw.hpp"
#include "nbsel/report.hpp"
#include "nbsel/tsp.hpp"

using namespace nbsel;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- A1 ----

Verdict a1_objective_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::size_t mismatches = 0;
  constexpr int kPairs = 1000;

  for (int i = 0; i < kPairs; ++i) {
    const std::size_t n = 1 + i % 20;
    const auto in = i % 2 ? oracle::random_matrix_tsp(n, rng) : oracle::random_euclidean_tsp(n, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    perm.resize(std::uniform_int_distribution<std::size_t>(0, n)(rng));
    tsp::TspSolution s{perm, oracle::complement(n, perm)};
    const auto got = tsp::objective(in, s);
    const auto ref = oracle::tsp_value(in, perm);
    mismatches += got.cost != ref.cost || got.violation != ref.violation;
  }
  for (int i = 0; i < kPairs; ++i) {
    const auto in = oracle::random_pdptw(1 + i % 9, 1 + i % 4, rng);
    const auto s = oracle::random_pdptw_solution(in, rng);
    const auto got = pdptw::objective(in, s);
    const auto ref = oracle::pdptw_value(in, s);
    mismatches += got.cost != ref.cost || got.violation != ref.violation;
  }
  for (int i = 0; i < kPairs; ++i) {
    const auto in = oracle::random_csp(1 + i % 20, 1 + i % 5, 1 + i % 6, rng);
    const auto s = csp::random_solution(in, rng);
    const auto got = csp::objective(in, s);
    mismatches += got.violation != oracle::csp_violation(in, s.sequence) || got.cost != 0.0;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 60.0,
          fmt::format("{} mismatches over 3x{} pairs, {:.2f}s", mismatches, kPairs, secs)};
}

// ---- A2 ----

std::unique_ptr<SearchModel> random_model(ProblemKind kind, std::mt19937_64& rng) {
  switch (kind) {
    case ProblemKind::kTsp:
      return std::make_unique<tsp::TspModel>(
          std::make_shared<const tsp::TspInstance>(oracle::random_euclidean_tsp(15, rng)));
    case ProblemKind::kPdptw:
      return std::make_unique<pdptw::PdptwModel>(
          std::make_shared<const pdptw::PdptwInstance>(oracle::random_pdptw(6, 3, rng)));
    case ProblemKind::kCsp:
      return std::make_unique<csp::CspModel>(
          std::make_shared<const csp::CspInstance>(oracle::random_csp(20, 4, 6, rng)));
  }
  return nullptr;
}

Verdict a2_descent_invariants() {
  const std::array kinds{ProblemKind::kTsp, ProblemKind::kPdptw, ProblemKind::kCsp};
  const std::array<const char*, 5> selectors{"random", "rr", "bsf", "egreedy", "ucb"};
  std::size_t runs = 0, iterations = 0, restarts = 0, violations = 0;
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 7; ++seed) {
    for (auto kind : kinds) {
      for (const char* name : selectors) {
        auto model = random_model(kind, rng);
        const RewardKind reward = kind == ProblemKind::kCsp ? RewardKind::kR1
                                  : seed % 2              ? RewardKind::kR3
                                                          : RewardKind::kR2;
        auto conf = configure_selector(kind, {name, reward, {}, "", seed});
        const std::size_t n = model->operator_count();
        std::vector<bool> expected_tabu(n, false);
        double last_best = std::numeric_limits<double>::infinity();
        double min_seen = std::numeric_limits<double>::infinity();
        bool first = true;

        RunOptions o;
        o.budget = Budget::of_iterations(1000);
        o.seed = seed;
        o.observer = [&](const IterationEvent& ev) {
          const auto op = ev.operator_id;
          if (first) {
            min_seen = std::min(min_seen, ev.outcome.before.total());
            first = false;
          }
          violations += ev.tabu_before != expected_tabu;
          violations += ev.tabu_before[op];
          violations += ev.accepted != ev.outcome.found_improving;
          if (ev.accepted) {
            violations += !(ev.outcome.after.total() < ev.outcome.before.total());
            violations += ev.current_after != ev.outcome.after;
          } else if (!ev.restarted) {
            violations += ev.current_after != ev.outcome.before;
          }
          const auto tabu_count = std::count(ev.tabu_before.begin(), ev.tabu_before.end(), true);
          const bool all_tabu = !ev.accepted && static_cast<std::size_t>(tabu_count) + 1 == n;
          violations += ev.restarted != all_tabu;
          violations += model->objective() != ev.current_after;

          min_seen = std::min(min_seen, ev.current_after.total());
          violations += ev.best.total() > last_best;
          violations += ev.best.total() != min_seen;
          last_best = ev.best.total();

          if (ev.accepted || ev.restarted) {
            std::fill(expected_tabu.begin(), expected_tabu.end(), false);
          } else {
            expected_tabu[op] = true;
          }
          restarts += ev.restarted;
          ++iterations;
        };
        (void)run_search(*model, *conf.selector, conf.reward, o);
        ++runs;
      }
    }
  }
  return {violations == 0 && runs >= 100 && restarts > 0,
          fmt::format("{} runs, {} iterations, {} restarts, {} violations", runs, iterations,
                      restarts, violations)};
}

// ---- A3 ----

struct Extremes {
  double max_feasible = -std::numeric_limits<double>::infinity();
  double min_infeasible = std::numeric_limits<double>::infinity();
  std::size_t feasible = 0;
  std::size_t infeasible = 0;

  void add(const ObjectiveValue& v) {
    if (v.feasible()) {
      max_feasible = std::max(max_feasible, v.total());
      ++feasible;
    } else {
      min_infeasible = std::min(min_infeasible, v.total());
      ++infeasible;
    }
  }
  [[nodiscard]] bool dominated() const { return feasible == 0 || max_feasible < min_infeasible; }
};

void each_partial_path(std::size_t n, std::vector<std::size_t>& path, std::vector<bool>& used,
                       const std::function<void(const std::vector<std::size_t>&)>& visit) {
  visit(path);
  for (std::size_t c = 0; c < n; ++c) {
    if (used[c]) continue;
    used[c] = true;
    path.push_back(c);
    each_partial_path(n, path, used, visit);
    path.pop_back();
    used[c] = false;
  }
}

Verdict a3_dominance() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(33);
  std::size_t instances = 0, violations = 0, solutions = 0, with_both = 0;

  for (std::size_t n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      const auto in = rep % 2 ? oracle::random_matrix_tsp(n, rng)
                              : oracle::random_euclidean_tsp(n, rng);
      Extremes ex;
      std::vector<std::size_t> path;
      std::vector<bool> used(n, false);
      each_partial_path(n, path, used, [&](const std::vector<std::size_t>& p) {
        ex.add(tsp::objective(in, {p, oracle::complement(n, p)}));
      });
      violations += !ex.dominated();
      with_both += ex.feasible > 0 && ex.infeasible > 0;
      solutions += ex.feasible + ex.infeasible;
      ++instances;
    }
  }

  // Every PDPTW solution with 3 requests on 2 vehicles: choose the routed
  // requests, order their locations, cut the order into two routes.
  for (int rep = 0; rep < 40; ++rep) {
    const auto in = rep % 4 == 0 ? oracle::random_pdptw(3, 2, rng, 8.0)
                                 : oracle::random_pdptw(3, 2, rng);
    Extremes ex;
    for (unsigned mask = 0; mask < 8; ++mask) {
      std::vector<std::size_t> locs;
      std::vector<std::size_t> unrouted;
      for (std::size_t r = 0; r < 3; ++r) {
        if (mask & (1U << r)) {
          locs.push_back(in.pickup_of[r]);
          locs.push_back(in.delivery_of[r]);
        } else {
          unrouted.push_back(r);
        }
      }
      std::sort(locs.begin(), locs.end());
      do {
        for (std::size_t cut = 0; cut <= locs.size(); ++cut) {
          pdptw::PdptwSolution s;
          s.routes = {std::vector<std::size_t>(locs.begin(), locs.begin() + cut),
                      std::vector<std::size_t>(locs.begin() + cut, locs.end())};
          s.unrouted = unrouted;
          ex.add(pdptw::objective(in, s));
        }
      } while (std::next_permutation(locs.begin(), locs.end()));
    }
    violations += !ex.dominated();
    with_both += ex.feasible > 0 && ex.infeasible > 0;
    solutions += ex.feasible + ex.infeasible;
    ++instances;
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 300.0 && with_both > instances / 2,
          fmt::format("{} instances ({} with both classes), {} solutions, {} violations, {:.1f}s",
                      instances, with_both, solutions, violations, secs)};
}

// ---- A4 ----

Verdict a4_small_tsp() {
  int optimal = 0, within5 = 0;
  double worst = 0.0, slowest = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    auto inst = std::make_shared<const tsp::TspInstance>(oracle::random_euclidean_tsp(10, rng));
    const double opt = oracle::held_karp(*inst);
    tsp::TspModel model(inst);
    auto conf = configure_selector(ProblemKind::kTsp, {"egreedy", RewardKind::kR2, {}, "", seed});
    RunOptions o;
    o.budget = Budget::of_seconds(10.0);
    o.seed = seed;
    o.detail = TraceDetail::kImprovements;
    o.stop_at_total = opt;
    const auto r = run_search(model, *conf.selector, conf.reward, o);
    const double gap = primal_gap(r.best, opt);
    optimal += gap == 0.0;
    within5 += gap <= 0.05;
    worst = std::max(worst, gap);
    slowest = std::max(slowest, r.trace.records.back().elapsed_ms / 1000.0);
  }
  return {optimal >= 8 && within5 == 10,
          fmt::format("optimal {}/10, gap<=5% {}/10, worst gap {:.4f}, slowest {:.3f}s", optimal,
                      within5, worst, slowest)};
}

// ---- A5 ----

Verdict a5_rewards() {
  auto outcome = [](double before, double after, double secs) {
    MoveOutcome o;
    o.found_improving = after < before;
    o.before = {before, 0.0};
    o.after = {after, 0.0};
    o.elapsed_seconds = secs;
    return o;
  };
  std::size_t failures = 0;
  failures += reward_r2(outcome(150, 50, 0.1)) != 2.0;
  failures += reward_r2(outcome(60, 50, 0.1)) != 1.0;

  // R1 telescoping per episode, on every problem.
  std::size_t episodes = 0;
  double worst = 0.0;
  std::mt19937_64 rng(5);
  for (auto kind : {ProblemKind::kTsp, ProblemKind::kPdptw, ProblemKind::kCsp}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto model = random_model(kind, rng);
      RandomSelector sel(seed);
      double start = model->objective().total();
      double sum = 0.0;
      bool fresh = true;
      double current = 0.0;
      auto close_episode = [&](double end) {
        worst = std::max(worst, std::abs(sum - (start - end)));
        ++episodes;
      };
      RunOptions o;
      o.budget = Budget::of_iterations(2000);
      o.seed = seed;
      o.observer = [&](const IterationEvent& ev) {
        if (fresh) {
          start = ev.outcome.before.total();
          fresh = false;
        }
        if (ev.restarted) {
          close_episode(ev.outcome.before.total());
          start = ev.current_after.total();
          sum = 0.0;
        } else {
          sum += ev.reward;
        }
        current = ev.current_after.total();
      };
      (void)run_search(*model, sel, RewardFunction(RewardKind::kR1), o);
      close_episode(current);
    }
  }
  failures += worst > 1e-9;

  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_r3 = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double before = 1000 * u(rng);
    const double after = i % 4 == 0 ? before : before - 50 * u(rng);
    const double secs = 0.001 + u(rng);
    const RewardWeights w{u(rng), u(rng), u(rng)};
    const double hand =
        w.w1 * (after < before ? 1.0 : 0.0) + w.w2 * secs + w.w3 * (before - after) / secs;
    worst_r3 = std::max(worst_r3, std::abs(reward_r3(outcome(before, after, secs), w) - hand));
  }
  failures += worst_r3 > 1e-9;
  return {failures == 0,
          fmt::format("R2(100)={} R2(10)={}, {} episodes max telescoping error {:.3g}, "
                      "R3 max error {:.3g}",
                      reward_r2(outcome(150, 50, 0.1)), reward_r2(outcome(60, 50, 0.1)), episodes,
                      worst, worst_r3)};
}

// ---- A6 ----

Verdict a6_bandits() {
  // 2 x 3 homogeneity test; with 2 degrees of freedom p = exp(-x/2).
  std::array<double, 3> greedy{}, random{};
  Rng r1(101), r2(202);
  const std::vector<OperatorId> arms{0, 1, 2};
  const BanditState skewed = [] {
    BanditState s(3, 0.1);
    s.estimates = {0.0, 5.0, 1.0};
    return s;
  }();
  for (int i = 0; i < 10000; ++i) {
    greedy[select_epsilon_greedy(skewed, 1.0, arms, r1)] += 1;
    random[select_random(arms, r2)] += 1;
  }
  double x = 0;
  for (int k = 0; k < 3; ++k) {
    const double e = (greedy[k] + random[k]) / 2;
    x += (greedy[k] - e) * (greedy[k] - e) / e + (random[k] - e) * (random[k] - e) / e;
  }
  const double p = std::exp(-x / 2);

  bool ucb_once = true;
  for (std::size_t n = 1; n <= 8; ++n) {
    BanditState s(n, 0.1);
    std::vector<OperatorId> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> pulls(n, 0);
    for (std::size_t t = 0; t < n; ++t) {
      const auto a = select_ucb(s, 1.0, all);
      ++pulls[a];
      bandit_update(s, a, static_cast<double>(n - a));
    }
    ucb_once = ucb_once && std::all_of(pulls.begin(), pulls.end(), [](int c) { return c == 1; });
  }

  int good = 0;
  double lowest_share = 1.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    std::normal_distribution<double> noise(0.0, 0.5);
    const std::array<double, 3> means{1.0, 2.0, 3.0};
    BanditState s(3, 0.1);
    int best = 0;
    for (int t = 0; t < 10000; ++t) {
      const auto a = select_epsilon_greedy(s, 0.1, arms, rng);
      bandit_update(s, a, means[a] + noise(rng));
      best += t >= 5000 && a == 2;
    }
    const double share = best / 5000.0;
    lowest_share = std::min(lowest_share, share);
    good += share >= 0.6;
  }
  return {p > 0.01 && ucb_once && good >= 9,
          fmt::format("chi-square p={:.3f}, ucb each arm once: {}, best-arm share >=60% in {}/10 "
                      "seeds (min {:.3f})",
                      p, ucb_once ? "yes" : "no", good, lowest_share)};
}

// ---- A7 ----

// Wraps a selector and records its choices while cities are unrouted.
class InsertWatcher final : public Selector {
 public:
  explicit InsertWatcher(Selector& inner) : inner_(inner) {}
  std::string name() const override { return inner_.name(); }
  OperatorId get_move(const SearchModel& m, const std::vector<bool>& tabu,
                      std::uint64_t step) override {
    const auto id = inner_.get_move(m, tabu, step);
    const auto& tm = dynamic_cast<const tsp::TspModel&>(m);
    if (!tm.current().unrouted.empty()) {
      ++unrouted_steps;
      inserts += id == tsp::kInsert;
      missed_insert += !tabu[tsp::kInsert] && id != tsp::kInsert;
    }
    return id;
  }
  void learn(const Transition& t) override { inner_.learn(t); }
  void terminate_episode() override { inner_.terminate_episode(); }

  std::size_t unrouted_steps = 0;
  std::size_t inserts = 0;
  std::size_t missed_insert = 0;

 private:
  Selector& inner_;
};

Verdict a7_insert_preference() {
  std::mt19937_64 rng(24);
  auto inst = std::make_shared<const tsp::TspInstance>(oracle::random_euclidean_tsp(24, rng));
  std::string detail;
  bool pass = true;
  for (const char* name : {"bsf", "random", "rr"}) {
    std::size_t steps = 0, inserts = 0, missed = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      tsp::TspModel model(inst);
      auto conf = configure_selector(ProblemKind::kTsp, {name, RewardKind::kR2, {}, "", seed});
      InsertWatcher w(*conf.selector);
      RunOptions o;
      o.budget = Budget::of_iterations(4000);
      o.seed = seed;
      (void)run_search(model, w, conf.reward, o);
      steps += w.unrouted_steps;
      inserts += w.inserts;
      missed += w.missed_insert;
    }
    const double share = steps ? static_cast<double>(inserts) / steps : 0.0;
    if (std::string(name) == "bsf") {
      pass = pass && missed == 0 && steps > 0;
      detail += fmt::format("bsf skipped a free insert {} times in {} steps; ", missed, steps);
    } else {
      pass = pass && std::abs(share - 1.0 / 3) <= 0.05;
      detail += fmt::format("{} insert share {:.3f} over {} steps; ", name, share, steps);
    }
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// ---- A8 ----

Verdict a8_reporting() {
  std::size_t failures = 0;
  failures += primal_gap({100, 0}, 100) != 0.0;
  failures += primal_gap({40, 7}, 100) != 1.0;
  failures += std::abs(primal_gap({150, 0}, 100) - 1.0 / 3) > 1e-15;
  const double ia = gap_integral(fixtures::integral_fixture_a(), 100, 1000);
  const double ib = gap_integral(fixtures::integral_fixture_b(), 100, 1000);
  failures += std::abs(ia - fixtures::kIntegralA) > 1e-12;
  failures += std::abs(ib - fixtures::kIntegralB) > 1e-12;
  const auto report = aggregate_report(fixtures::aggregate_fixture(),
                                       fixtures::aggregate_best_known(), fixtures::aggregate_grid());
  const bool table = report.rows == fixtures::aggregate_expected();
  failures += !table;
  return {failures == 0,
          fmt::format("gaps (0, 1, 1/3) ok, integrals {:.12f} / {:.12f}, aggregate table {}", ia,
                      ib, table ? "exact" : "differs")};
}

// ---- A9 ----

Verdict a9_bridge_soak() {
  constexpr std::uint64_t kSteps = 10000;
  struct Case {
    ProblemKind kind;
    const char* file;
  };
  const std::array cases{Case{ProblemKind::kTsp, "rand12.tsp"}, Case{ProblemKind::kPdptw, "lr3.txt"},
                         Case{ProblemKind::kCsp, "cars10.txt"}};
  std::size_t desync = 0, identical = 0;
  std::uint64_t restarts = 0;
  std::string failure;
  for (const auto& c : cases) {
    RunOptions o;
    o.budget = Budget::of_iterations(kSteps);
    o.seed = 77;
    const RewardFunction reward(c.kind == ProblemKind::kCsp ? RewardKind::kR1 : RewardKind::kR2);

    auto local_model = load_model(c.kind, fixture(c.file));
    ScriptedSelector local(ScriptedPolicy::parse("round-robin"));
    const auto expected = run_search(*local_model, local, reward, o);

    bridge::MockAgentServer agent(wire::Address::parse("tcp:127.0.0.1:0"), {});
    bridge::BridgeConfig bc;
    bc.address = agent.address();
    bc.reward = std::string(reward.name());
    bridge::BridgeSelector remote(bc);
    auto remote_model = load_model(c.kind, fixture(c.file));
    try {
      const auto got = run_search(*remote_model, remote, reward, o);
      const auto tally = agent.wait();
      desync += tally.acts != kSteps || tally.learns != kSteps ||
                tally.episodes != got.restarts || tally.done_count != got.restarts;
      identical += canonical_trace(got.trace) == canonical_trace(expected.trace);
      restarts += got.restarts;
    } catch (const std::exception& e) {
      ++desync;
      failure = e.what();
    }
  }
  return {desync == 0 && identical == cases.size(),
          fmt::format("{} problems x {} steps over loopback tcp, {} desyncs, {} restarts, "
                      "{}/{} traces identical{}",
                      cases.size(), kSteps, desync, restarts, identical, cases.size(),
                      failure.empty() ? "" : " (" + failure + ")")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"A1", a1_objective_oracles}, {"A2", a2_descent_invariants}, {"A3", a3_dominance},
      {"A4", a4_small_tsp},         {"A5", a5_rewards},            {"A6", a6_bandits},
      {"A7", a7_insert_preference}, {"A8", a8_reporting},          {"A9", a9_bridge_soak},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %s  %s\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
