#include "nbsel/selectors.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "text_util.hpp"

namespace nbsel {

std::vector<OperatorId> non_tabu_ids(const std::vector<bool>& tabu) {
  std::vector<OperatorId> ids;
  for (OperatorId a = 0; a < tabu.size(); ++a) {
    if (!tabu[a]) ids.push_back(a);
  }
  return ids;
}

void SelectorParams::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ConfigError(fmt::format("epsilon must lie in [0,1], got {}", epsilon));
  }
  if (!(ucb_c >= 0.0) || !std::isfinite(ucb_c)) {
    throw ConfigError(fmt::format("ucb c must be a non-negative number, got {}", ucb_c));
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError(fmt::format("alpha must lie in (0,1], got {}", alpha));
  }
}

void SlopeState::record(OperatorId op, double slope) {
  calls[op] += 1;
  mean_slope[op] += (slope - mean_slope[op]) / static_cast<double>(calls[op]);
}

namespace {

void require_nonempty(std::span<const OperatorId> non_tabu) {
  if (non_tabu.empty()) throw std::logic_error("selection over an empty non-tabu set");
}

OperatorId argmax(const std::vector<double>& values, std::span<const OperatorId> non_tabu) {
  OperatorId best = non_tabu.front();
  for (OperatorId a : non_tabu) {
    if (values[a] > values[best]) best = a;
  }
  return best;
}

}  // namespace

OperatorId select_random(std::span<const OperatorId> non_tabu, Rng& rng) {
  require_nonempty(non_tabu);
  std::uniform_int_distribution<std::size_t> pick(0, non_tabu.size() - 1);
  return non_tabu[pick(rng)];
}

std::pair<OperatorId, std::size_t> select_round_robin(std::span<const OperatorId> non_tabu,
                                                      std::size_t cursor, std::size_t n) {
  require_nonempty(non_tabu);
  std::vector<bool> open(n, false);
  for (OperatorId a : non_tabu) open.at(a) = true;
  for (std::size_t k = 0; k < n; ++k) {
    const OperatorId a = (cursor + k) % n;
    if (open[a]) return {a, (a + 1) % n};
  }
  throw std::logic_error("unreachable");
}

OperatorId select_bsf(const SlopeState& state, std::span<const OperatorId> non_tabu) {
  require_nonempty(non_tabu);
  // Uncalled operators count as slope 0 and win ties against called ones.
  OperatorId best = non_tabu.front();
  for (OperatorId a : non_tabu) {
    const double sa = state.mean_slope[a];
    const double sb = state.mean_slope[best];
    if (sa > sb || (sa == sb && state.calls[a] == 0 && state.calls[best] != 0)) best = a;
  }
  return best;
}

OperatorId select_epsilon_greedy(const BanditState& state, double epsilon,
                                 std::span<const OperatorId> non_tabu, Rng& rng) {
  require_nonempty(non_tabu);
  const double u = std::generate_canonical<double, 53>(rng);
  if (u < epsilon) return select_random(non_tabu, rng);
  return argmax(state.estimates, non_tabu);
}

OperatorId select_ucb(const BanditState& state, double c, std::span<const OperatorId> non_tabu) {
  require_nonempty(non_tabu);
  for (OperatorId a : non_tabu) {
    if (state.pulls[a] == 0) return a;
  }
  const double log_t = std::log(static_cast<double>(std::max<std::uint64_t>(state.step, 1)));
  std::vector<double> score(state.estimates.size(), 0.0);
  for (OperatorId a : non_tabu) {
    score[a] = state.estimates[a] +
               c * std::sqrt(2.0 * log_t / static_cast<double>(state.pulls[a]));
  }
  return argmax(score, non_tabu);
}

void bandit_update(BanditState& state, OperatorId op, double reward) {
  state.estimates.at(op) = (1.0 - state.alpha) * state.estimates[op] + state.alpha * reward;
  state.pulls[op] += 1;
  state.step += 1;
}

OperatorId RandomSelector::get_move(const SearchModel&, const std::vector<bool>& tabu,
                                    std::uint64_t) {
  const auto ids = non_tabu_ids(tabu);
  return select_random(ids, rng_);
}

OperatorId RoundRobinSelector::get_move(const SearchModel& model, const std::vector<bool>& tabu,
                                        std::uint64_t) {
  const auto ids = non_tabu_ids(tabu);
  const auto [op, next] = select_round_robin(ids, cursor_, model.operator_count());
  cursor_ = next;
  return op;
}

OperatorId BsfSelector::get_move(const SearchModel& model, const std::vector<bool>& tabu,
                                 std::uint64_t) {
  if (state_.calls.empty()) state_ = SlopeState(model.operator_count());
  const auto ids = non_tabu_ids(tabu);
  return select_bsf(state_, ids);
}

void BsfSelector::learn(const Transition& t) {
  state_.record(t.operator_id, t.outcome.improvement() / t.outcome.elapsed_seconds);
}

EpsilonGreedySelector::EpsilonGreedySelector(SelectorParams params, std::uint64_t seed)
    : params_(params), rng_(seed) {
  params_.validate();
}

OperatorId EpsilonGreedySelector::get_move(const SearchModel& model,
                                           const std::vector<bool>& tabu, std::uint64_t) {
  if (state_.pulls.empty()) state_ = BanditState(model.operator_count(), params_.alpha);
  const auto ids = non_tabu_ids(tabu);
  return select_epsilon_greedy(state_, params_.epsilon, ids, rng_);
}

void EpsilonGreedySelector::learn(const Transition& t) {
  bandit_update(state_, t.operator_id, t.reward);
}

UcbSelector::UcbSelector(SelectorParams params) : params_(params) { params_.validate(); }

OperatorId UcbSelector::get_move(const SearchModel& model, const std::vector<bool>& tabu,
                                 std::uint64_t) {
  if (state_.pulls.empty()) state_ = BanditState(model.operator_count(), params_.alpha);
  const auto ids = non_tabu_ids(tabu);
  return select_ucb(state_, params_.ucb_c, ids);
}

void UcbSelector::learn(const Transition& t) { bandit_update(state_, t.operator_id, t.reward); }

ScriptedPolicy ScriptedPolicy::parse(std::string_view text) {
  ScriptedPolicy p;
  if (text == "round-robin" || text == "rr") {
    p.kind_ = Kind::kRoundRobin;
  } else if (text == "lowest") {
    p.kind_ = Kind::kLowest;
  } else if (text.starts_with("always:")) {
    const auto k = detail::parse_number<std::size_t>(text.substr(7));
    if (!k) throw ConfigError("bad operator id in policy '" + std::string(text) + "'");
    p.kind_ = Kind::kAlways;
    p.fixed_ = *k;
  } else {
    throw ConfigError("unknown scripted policy '" + std::string(text) +
                      "' (expected always:K, round-robin or lowest)");
  }
  return p;
}

OperatorId ScriptedPolicy::choose(const std::vector<bool>& tabu) {
  switch (kind_) {
    case Kind::kAlways: return fixed_;
    case Kind::kLowest: return non_tabu_ids(tabu).front();
    case Kind::kRoundRobin: {
      const auto [op, next] = select_round_robin(non_tabu_ids(tabu), cursor_, tabu.size());
      cursor_ = next;
      return op;
    }
  }
  return 0;
}

std::string ScriptedPolicy::describe() const {
  switch (kind_) {
    case Kind::kAlways: return fmt::format("always:{}", fixed_);
    case Kind::kLowest: return "lowest";
    case Kind::kRoundRobin: return "round-robin";
  }
  return "?";
}

}  // namespace nbsel
