// nbsel: run selector grids, report primal gaps, serve a mock agent.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nbsel/batch.hpp"
#include "nbsel/bridge.hpp"
#include "nbsel/report.hpp"

using namespace nbsel;

namespace {

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const auto piece = item.substr(start, comma == std::string::npos ? std::string::npos
                                                                       : comma - start);
      if (!piece.empty()) out.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

struct RunArgs {
  std::string problem;
  std::vector<std::string> instances;
  std::vector<std::string> selectors;
  std::vector<std::string> rewards;
  std::vector<std::uint64_t> seeds;
  double budget_seconds = 0.0;
  long long budget_iterations = -1;
  std::string bridge_addr;
  std::vector<std::string> params;
  std::string out = "traces";
  bool force = false;
  unsigned jobs = 1;
  std::string trace_detail;
};

int do_run(const RunArgs& a) {
  BatchConfig cfg;
  cfg.problem = parse_problem_kind(a.problem);
  cfg.instances = a.instances;
  cfg.selectors = split_commas(a.selectors);
  for (const auto& r : split_commas(a.rewards)) cfg.rewards.push_back(parse_reward_kind(r));
  if (cfg.rewards.empty()) {
    cfg.rewards.push_back(cfg.problem == ProblemKind::kCsp ? RewardKind::kR1 : RewardKind::kR2);
  }
  cfg.seeds = a.seeds.empty() ? std::vector<std::uint64_t>{0} : a.seeds;
  if (a.budget_iterations >= 0 && a.budget_seconds != 0.0) {
    throw ConfigError("give either --budget-seconds or --budget-iterations, not both");
  }
  if (a.budget_iterations >= 0) {
    cfg.budget = Budget::of_iterations(static_cast<std::uint64_t>(a.budget_iterations));
  } else if (a.budget_seconds != 0.0) {
    cfg.budget = Budget::of_seconds(a.budget_seconds);
  } else {
    cfg.budget = Budget::of_seconds(cfg.problem == ProblemKind::kCsp ? 300.0 : 60.0);
  }
  if (a.trace_detail.empty()) {
    cfg.detail = cfg.budget.kind == Budget::Kind::kIterations ? TraceDetail::kEveryIteration
                                                              : TraceDetail::kImprovements;
  } else if (a.trace_detail == "every") {
    cfg.detail = TraceDetail::kEveryIteration;
  } else if (a.trace_detail == "improvements") {
    cfg.detail = TraceDetail::kImprovements;
  } else {
    throw ConfigError("--trace expects 'every' or 'improvements'");
  }
  cfg.overrides = parse_overrides(a.params);
  cfg.bridge_address = a.bridge_addr;
  cfg.out_dir = a.out;
  cfg.force = a.force;
  cfg.jobs = a.jobs;

  const auto cells = run_batch(cfg);
  std::size_t failed = 0;
  for (const auto& c : cells) {
    fmt::print("{}\t{}\t{}\ts{}\t{}\t{}\n", c.instance, c.selector, c.reward, c.seed, c.status,
               c.message);
    if (c.status == "failed") ++failed;
  }
  if (failed > 0) fmt::print(stderr, "{} of {} cells failed\n", failed, cells.size());
  return failed == 0 ? 0 : 1;
}

int do_report(const std::string& dir, const std::string& best_known_path,
              const std::vector<double>& checkpoints_s, const std::string& out) {
  const auto traces = load_trace_dir(dir);
  const auto table = load_best_known(best_known_path);
  std::vector<double> grid;
  if (!checkpoints_s.empty()) {
    for (double s : checkpoints_s) grid.push_back(s * 1000.0);
  } else {
    double budget = 0.0;
    for (const auto& t : traces) budget = std::max(budget, trace_budget_ms(t));
    grid = default_time_grid(budget > 0.0 ? budget : 1000.0);
  }
  const std::string text = format_report(aggregate_report(traces, table, grid));
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::trunc);
    f << text;
  }
  return 0;
}

int do_gap(const std::vector<std::string>& files, const std::string& best_known_path,
           std::optional<double> c_star) {
  BestKnownTable table;
  if (!best_known_path.empty()) table = load_best_known(best_known_path);
  fmt::print("instance\tselector\treward\tseed\tfinal_gap\tgap_integral\n");
  int status = 0;
  for (const auto& f : files) {
    const auto t = load_trace(f);
    double cs = 0.0;
    if (c_star) {
      cs = *c_star;
    } else if (const auto it = table.find(t.header.instance); it != table.end()) {
      cs = it->second;
    } else {
      fmt::print(stderr, "{}: no best-known cost for '{}'\n", f, t.header.instance);
      status = 1;
      continue;
    }
    const double budget = trace_budget_ms(t);
    const double final_gap = t.records.empty() ? 1.0 : primal_gap(t.records.back().best(), cs);
    const std::string integral = budget > 0.0 ? format_real(gap_integral(t, cs, budget)) : "nan";
    fmt::print("{}\t{}\t{}\t{}\t{}\t{}\n", t.header.instance, t.header.selector, t.header.reward,
               t.header.seed, format_real(final_gap), integral);
  }
  return status;
}

int do_mock_agent(const std::string& listen, const std::string& policy, int sessions) {
  const auto address = wire::Address::parse(listen);
  wire::Listener listener(address);
  fmt::print(stderr, "mock agent ({}) listening on {}\n", policy, listener.address().to_string());
  for (int served = 0; sessions <= 0 || served < sessions; ++served) {
    auto conn = listener.accept(std::chrono::hours(24));
    bridge::MockAgentOptions opts;
    opts.policy = ScriptedPolicy::parse(policy);
    try {
      const auto s = bridge::serve_mock_agent(conn, opts);
      fmt::print("session {}: acts={} learns={} episodes={} done={}\n", served + 1, s.acts,
                 s.learns, s.episodes, s.done_count);
    } catch (const wire::WireError& e) {
      fmt::print(stderr, "session {}: {}\n", served + 1, e.what());
    }
    std::fflush(stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local search with pluggable neighborhood selection"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a (instance x selector x reward x seed) grid");
  run_cmd->add_option("--problem", run.problem, "tsp, pdptw or csp")->required();
  run_cmd->add_option("--instance,--instances", run.instances, "Instance files")->required();
  run_cmd->add_option("--selector", run.selectors,
                      "random, rr, bsf, egreedy, ucb, ddqn, ppo, mock (comma list allowed)")
      ->required();
  run_cmd->add_option("--reward", run.rewards, "r1, r2 or r3 (comma list allowed)");
  run_cmd->add_option("--seed,--seeds", run.seeds, "Random seeds");
  run_cmd->add_option("--budget-seconds", run.budget_seconds, "Wall-clock budget per run");
  run_cmd->add_option("--budget-iterations", run.budget_iterations, "Iteration budget per run");
  run_cmd->add_option("--bridge-addr", run.bridge_addr, "Agent address: unix:PATH or HOST:PORT");
  run_cmd->add_option("--params", run.params, "Hyperparameter overrides key=value");
  run_cmd->add_option("--out", run.out, "Trace directory")->capture_default_str();
  run_cmd->add_flag("--force", run.force, "Rerun cells whose trace already exists");
  run_cmd->add_option("--jobs", run.jobs, "Cells run in parallel")->capture_default_str();
  run_cmd->add_option("--trace", run.trace_detail, "every or improvements");

  std::string report_dir, report_best, report_out;
  std::vector<double> checkpoints;
  auto* report_cmd = app.add_subcommand("report", "Mean primal gap over time per selector/reward");
  report_cmd->add_option("--traces,--out-dir", report_dir, "Trace directory")->required();
  report_cmd->add_option("--best-known", report_best, "Best-known cost table")->required();
  report_cmd->add_option("--checkpoints", checkpoints, "Checkpoints in seconds");
  report_cmd->add_option("--out", report_out, "Write the table here instead of stdout");

  std::vector<std::string> gap_files;
  std::string gap_best;
  std::optional<double> gap_cstar;
  auto* gap_cmd = app.add_subcommand("gap", "Final gap and gap integral of trace files");
  gap_cmd->add_option("traces", gap_files, "Trace files")->required();
  gap_cmd->add_option("--best-known", gap_best, "Best-known cost table");
  gap_cmd->add_option("--c-star", gap_cstar, "Best-known cost for every trace");

  std::string listen, policy = "round-robin";
  int sessions = 1;
  auto* mock_cmd = app.add_subcommand("mock-agent", "Serve scripted decisions over the bridge");
  mock_cmd->add_option("--listen,--bridge-addr", listen, "unix:PATH or HOST:PORT")->required();
  mock_cmd->add_option("--policy", policy, "always:K, round-robin or lowest")->capture_default_str();
  mock_cmd->add_option("--sessions", sessions, "Sessions to serve, 0 for no limit")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run);
    if (*report_cmd) return do_report(report_dir, report_best, checkpoints, report_out);
    if (*gap_cmd) {
      if (gap_best.empty() && !gap_cstar) throw ConfigError("gap needs --best-known or --c-star");
      return do_gap(gap_files, gap_best, gap_cstar);
    }
    if (*mock_cmd) return do_mock_agent(listen, policy, sessions);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
