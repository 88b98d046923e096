#include "nbsel/batch.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "nbsel/bridge.hpp"
#include "nbsel/csp.hpp"
#include "nbsel/pdptw.hpp"
#include "nbsel/tsp.hpp"
#include "text_util.hpp"

namespace nbsel {

namespace fs = std::filesystem;

std::unique_ptr<SearchModel> load_model(ProblemKind problem, const std::string& path) {
  switch (problem) {
    case ProblemKind::kTsp:
      return std::make_unique<tsp::TspModel>(
          std::make_shared<const tsp::TspInstance>(tsp::load_tsplib(path)));
    case ProblemKind::kPdptw:
      return std::make_unique<pdptw::PdptwModel>(
          std::make_shared<const pdptw::PdptwInstance>(pdptw::load_lilim(path)));
    case ProblemKind::kCsp:
      return std::make_unique<csp::CspModel>(
          std::make_shared<const csp::CspInstance>(csp::load_csplib(path)));
  }
  throw ConfigError("unknown problem kind");
}

bool is_known_selector(const std::string& name) {
  return name == "random" || name == "rr" || name == "bsf" || name == "egreedy" ||
         name == "ucb" || name == "ddqn" || name == "ppo" || name == "mock";
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed) {
  // splitmix64 step, so the selector stream differs from the restart stream
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double param(const Hyperparameters& p, const char* key) { return p.at(key); }

}  // namespace

ConfiguredSelector configure_selector(ProblemKind problem, const SelectorSpec& spec) {
  if (!is_known_selector(spec.selector)) {
    throw ConfigError("unknown selector '" + spec.selector +
                      "' (expected random, rr, bsf, egreedy, ucb, ddqn, ppo or mock)");
  }
  const bool external = spec.selector == "ddqn" || spec.selector == "ppo" || spec.selector == "mock";
  ConfiguredSelector out;
  out.parameters = tuned_defaults(problem, spec.selector, spec.reward).values;
  apply_overrides(out.parameters, spec.overrides, !external);
  out.reward = RewardFunction(spec.reward, reward_weights_from(out.parameters));

  const std::uint64_t seed = derive_seed(spec.seed);
  if (spec.selector == "random") {
    out.selector = std::make_unique<RandomSelector>(seed);
  } else if (spec.selector == "rr") {
    out.selector = std::make_unique<RoundRobinSelector>();
  } else if (spec.selector == "bsf") {
    out.selector = std::make_unique<BsfSelector>();
  } else if (spec.selector == "egreedy") {
    SelectorParams p;
    p.epsilon = param(out.parameters, "epsilon");
    p.alpha = param(out.parameters, "alpha");
    out.selector = std::make_unique<EpsilonGreedySelector>(p, seed);
  } else if (spec.selector == "ucb") {
    SelectorParams p;
    p.ucb_c = param(out.parameters, "c");
    p.alpha = param(out.parameters, "alpha");
    out.selector = std::make_unique<UcbSelector>(p);
  } else {
    if (spec.bridge_address.empty()) {
      throw ConfigError("selector '" + spec.selector + "' needs --bridge-addr");
    }
    bridge::BridgeConfig bc;
    bc.address = spec.bridge_address;
    bc.agent = spec.selector;
    bc.reward = std::string(to_string(spec.reward));
    bc.gamma = out.parameters.contains("gamma") ? out.parameters.at("gamma") : 1.0;
    bc.hyperparameters = out.parameters;
    bc.seed = spec.seed;
    out.selector = std::make_unique<bridge::BridgeSelector>(std::move(bc));
  }
  return out;
}

std::string trace_file_name(const std::string& instance_path, const std::string& selector,
                            RewardKind reward, std::uint64_t seed) {
  return fmt::format("{}.{}.{}.s{}.trace", detail::stem(instance_path), selector,
                     to_string(reward), seed);
}

namespace {

void run_cell(const BatchConfig& cfg, const std::string& instance, const std::string& sel,
              RewardKind reward, std::uint64_t seed, CellResult& cell) {
  const fs::path target = fs::path(cfg.out_dir) / cell.trace_file;
  if (!cfg.force && fs::exists(target)) {
    cell.status = "skipped";
    cell.message = "trace exists";
    return;
  }
  try {
    auto model = load_model(cfg.problem, instance);
    auto conf = configure_selector(cfg.problem, {sel, reward, cfg.overrides, cfg.bridge_address, seed});
    RunOptions opts;
    opts.budget = cfg.budget;
    opts.seed = seed;
    opts.detail = cfg.detail;
    RunResult result = run_search(*model, *conf.selector, conf.reward, opts);
    save_trace(target.string(), result.trace);
    cell.status = "ok";
    cell.message = fmt::format("best={} iterations={} restarts={}", format_real(result.best.total()),
                               result.iterations, result.restarts);
  } catch (const std::exception& e) {
    cell.status = "failed";
    cell.message = e.what();
  }
}

std::string clean(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

std::vector<CellResult> run_batch(const BatchConfig& cfg) {
  cfg.budget.validate();
  for (const auto& s : cfg.selectors) {
    if (!is_known_selector(s)) throw ConfigError("unknown selector '" + s + "'");
  }
  fs::create_directories(cfg.out_dir);

  struct Job {
    std::string instance, selector;
    RewardKind reward;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& inst : cfg.instances) {
    for (const auto& sel : cfg.selectors) {
      for (RewardKind r : cfg.rewards) {
        for (std::uint64_t seed : cfg.seeds) jobs.push_back({inst, sel, r, seed});
      }
    }
  }
  std::vector<CellResult> cells(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    cells[i] = {j.instance, j.selector, std::string(to_string(j.reward)), j.seed,
                trace_file_name(j.instance, j.selector, j.reward, j.seed), "", ""};
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      run_cell(cfg, jobs[i].instance, jobs[i].selector, jobs[i].reward, jobs[i].seed, cells[i]);
    }
  };
  const unsigned n_threads = std::max(1U, std::min<unsigned>(cfg.jobs, jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ofstream manifest(fs::path(cfg.out_dir) / "manifest.tsv", std::ios::trunc);
  manifest << "instance\tselector\treward\tseed\tstatus\ttrace\tmessage\n";
  for (const auto& c : cells) {
    manifest << clean(c.instance) << '\t' << c.selector << '\t' << c.reward << '\t' << c.seed
             << '\t' << c.status << '\t' << c.trace_file << '\t' << clean(c.message) << '\n';
  }
  return cells;
}

}  // namespace nbsel
