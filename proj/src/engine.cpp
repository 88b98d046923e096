#include "nbsel/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

#include <fmt/format.h>

namespace nbsel {

std::string Budget::describe() const {
  if (kind == Kind::kIterations) return fmt::format("iterations:{}", iterations);
  return fmt::format("seconds:{}", format_real(seconds));
}

void Budget::validate() const {
  if (kind == Kind::kSeconds && !(seconds > 0.0 && std::isfinite(seconds))) {
    throw ConfigError(fmt::format("wall-clock budget must be positive, got {}", seconds));
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

MoveOutcome attempt_move(SearchModel& model, const std::vector<bool>& tabu, OperatorId op) {
  if (op >= model.operator_count() || tabu.at(op)) {
    throw std::logic_error(fmt::format("attempt_move on tabu or unknown operator {}", op));
  }
  return model.apply_operator(op);
}

namespace {

class TraceWriter {
 public:
  TraceWriter(RunTrace& trace, TraceDetail detail) : trace_(trace), detail_(detail) {}

  void add(const TraceRecord& r, bool improved) {
    if (detail_ == TraceDetail::kEveryIteration || improved || trace_.records.empty()) {
      trace_.records.push_back(r);
      pending_ = false;
    } else {
      last_ = r;
      pending_ = true;
    }
  }
  void close() {
    if (pending_) trace_.records.push_back(last_);
    pending_ = false;
  }

 private:
  RunTrace& trace_;
  TraceDetail detail_;
  TraceRecord last_;
  bool pending_ = false;
};

}  // namespace

RunResult run_search(SearchModel& model, Selector& selector, const RewardFunction& reward,
                     const RunOptions& options) {
  options.budget.validate();
  const std::size_t n_ops = model.operator_count();
  if (n_ops == 0) throw ConfigError("problem exposes no operators");

  RunResult result;
  RunTrace& trace = result.trace;
  trace.header.instance = std::string(model.instance_name());
  trace.header.problem = std::string(to_string(model.kind()));
  trace.header.selector = selector.name();
  trace.header.reward = std::string(reward.name());
  trace.header.seed = options.seed;
  trace.header.budget = options.budget.describe();
  trace.header.start = utc_timestamp();
  TraceWriter writer(trace, options.detail);

  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(Clock::now() - started).count();
  };
  const double deadline_ms = options.budget.seconds * 1000.0;
  auto out_of_budget = [&](std::uint64_t t) {
    if (options.budget.kind == Budget::Kind::kIterations) return t >= options.budget.iterations;
    return elapsed_ms() >= deadline_ms;
  };

  Rng rng(options.seed);
  model.restart(rng);
  model.keep_current_as_best();
  ObjectiveValue best = model.objective();
  auto reached_target = [&] {
    if (!options.stop_at_total) return false;
    return best.total() <= *options.stop_at_total + improvement_threshold(*options.stop_at_total);
  };
  writer.add({elapsed_ms(), 0, -1, false, best.cost, best.violation, best.total()}, true);

  std::vector<bool> tabu(n_ops, false);
  std::size_t tabu_count = 0;
  std::uint64_t t = 0;
  try {
    while (!out_of_budget(t) && !reached_target()) {
      IterationEvent ev;
      ev.iteration = t;
      if (options.observer) ev.tabu_before = tabu;

      const OperatorId op = selector.get_move(model, tabu, t);
      if (op >= n_ops) {
        throw ProtocolViolation(fmt::format("selector returned operator {} but only {} exist", op,
                                            n_ops),
                                static_cast<long long>(op));
      }
      if (tabu[op]) {
        throw ProtocolViolation(fmt::format("selector returned tabu operator {}", op),
                                static_cast<long long>(op));
      }

      const MoveOutcome outcome = attempt_move(model, tabu, op);
      const bool accepted = outcome.found_improving;
      bool restarted = false;
      ObjectiveValue current = outcome.after;
      if (accepted) {
        std::fill(tabu.begin(), tabu.end(), false);
        tabu_count = 0;
      } else {
        tabu[op] = true;
        ++tabu_count;
        if (tabu_count == n_ops) {
          selector.terminate_episode();
          model.restart(rng);
          std::fill(tabu.begin(), tabu.end(), false);
          tabu_count = 0;
          restarted = true;
          ++result.restarts;
          current = model.objective();
        }
      }

      bool improved = false;
      if (current.total() < best.total()) {
        model.keep_current_as_best();
        best = current;
        improved = true;
      }

      const double r = restarted ? 0.0 : reward(outcome);
      selector.learn(Transition{op, outcome, r, restarted, &model});

      ++t;
      writer.add({elapsed_ms(), t, static_cast<long long>(op), accepted, best.cost,
                  best.violation, best.total()},
                 improved);

      if (options.observer) {
        ev.operator_id = op;
        ev.outcome = outcome;
        ev.accepted = accepted;
        ev.restarted = restarted;
        ev.reward = r;
        ev.current_after = current;
        ev.best = best;
        options.observer(ev);
      }
    }
  } catch (...) {
    writer.close();
    selector.finish();
    throw;
  }
  writer.close();
  selector.finish();

  result.iterations = t;
  result.best = best;
  result.best_solution = model.describe_best();
  return result;
}

}  // namespace nbsel
