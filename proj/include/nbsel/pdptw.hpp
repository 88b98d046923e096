#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbsel/search_model.hpp"

namespace nbsel::pdptw {

struct Location {
  double x = 0.0;
  double y = 0.0;
  double demand = 0.0;  // load delta: > 0 pickups, < 0 deliveries
  double earliest = 0.0;
  double latest = 0.0;
  double service = 0.0;
  std::size_t pickup_partner = 0;    // set on deliveries
  std::size_t delivery_partner = 0;  // set on pickups
};

/// Location 0 is the depot. Requests are numbered by increasing pickup id.
struct PdptwInstance {
  std::string name;
  std::vector<Location> locations;
  std::size_t vehicle_count = 0;
  double capacity = 0.0;
  double speed = 1.0;
  std::vector<double> travel;  // Euclidean, N x N
  std::vector<std::size_t> pickup_of;
  std::vector<std::size_t> delivery_of;
  std::vector<long> request_of;  // -1 for the depot
  std::optional<double> best_known;
  double event_penalty = 1.0;  // set by build_instance

  [[nodiscard]] std::size_t size() const { return locations.size(); }
  [[nodiscard]] std::size_t request_count() const { return pickup_of.size(); }
  [[nodiscard]] double dist(std::size_t i, std::size_t j) const {
    return travel[i * locations.size() + j];
  }
  [[nodiscard]] double travel_time(std::size_t i, std::size_t j) const {
    return dist(i, j) / speed;
  }
  [[nodiscard]] bool is_pickup(std::size_t loc) const {
    return loc != 0 && locations[loc].delivery_partner != 0;
  }
  [[nodiscard]] bool is_delivery(std::size_t loc) const {
    return loc != 0 && locations[loc].pickup_partner != 0;
  }

  /// Penalty per soft-constraint event: an upper bound on any route-set
  /// length, plus one.
  [[nodiscard]] double violation_unit() const { return event_penalty; }
  /// Penalty per unrouted request (twice the event penalty).
  [[nodiscard]] double unrouted_penalty() const { return 2.0 * event_penalty; }
};

/// Builds travel matrix, request tables and penalty scale; validates pairing.
PdptwInstance build_instance(std::string name, std::size_t vehicle_count, double capacity,
                             double speed, std::vector<Location> locations);

/// One location list per vehicle (depot implicit at both ends) plus the ids
/// of unrouted requests, kept sorted.
struct PdptwSolution {
  std::vector<std::vector<std::size_t>> routes;
  std::vector<std::size_t> unrouted;

  static PdptwSolution empty(const PdptwInstance& instance);
  friend bool operator==(const PdptwSolution&, const PdptwSolution&) = default;
};

/// Forward-simulation result for one route.
struct RouteStats {
  double cost = 0.0;
  std::size_t time_window = 0;
  std::size_t capacity = 0;
  std::size_t precedence = 0;

  [[nodiscard]] std::size_t events() const { return time_window + capacity + precedence; }
};

RouteStats simulate_route(const PdptwInstance& instance, std::span<const std::size_t> route);
ObjectiveValue objective(const PdptwInstance& instance, const PdptwSolution& solution);

enum PdptwOperator : OperatorId {
  kInsertPair = 0,
  kMoveNode = 1,
  kMovePair = 2,
  kExchangeSegments = 3
};
inline constexpr std::size_t kOperatorCount = 4;
inline constexpr std::size_t kMaxSegmentLength = 10;

MoveOutcome op_insert_pair(const PdptwInstance& instance, PdptwSolution& solution);
MoveOutcome op_move_node(const PdptwInstance& instance, PdptwSolution& solution);
MoveOutcome op_move_pair(const PdptwInstance& instance, PdptwSolution& solution);
MoveOutcome op_exchange_segments(const PdptwInstance& instance, PdptwSolution& solution);

/// Li & Lim benchmark layout.
PdptwInstance parse_lilim(std::string_view text, std::string name = "lilim");
PdptwInstance load_lilim(const std::string& path);

GraphEncoding encode_state(const PdptwInstance& instance, const PdptwSolution& solution);
inline constexpr std::size_t kExtraVertexAttrs = 7;  // x, y, e, l, service, load delta, request

class PdptwModel final : public SearchModel {
 public:
  explicit PdptwModel(std::shared_ptr<const PdptwInstance> instance);

  [[nodiscard]] ProblemKind kind() const override { return ProblemKind::kPdptw; }
  [[nodiscard]] std::string_view instance_name() const override { return instance_->name; }
  [[nodiscard]] std::size_t operator_count() const override { return kOperatorCount; }
  [[nodiscard]] std::string_view operator_name(OperatorId op) const override;
  void restart(Rng& rng) override;
  [[nodiscard]] ObjectiveValue objective() const override;
  MoveOutcome apply_operator(OperatorId op) override;
  void keep_current_as_best() override;
  [[nodiscard]] ObjectiveValue best_objective() const override;
  [[nodiscard]] std::string describe_best() const override;
  [[nodiscard]] StateEncoding encode_state() const override;
  [[nodiscard]] EncodingSchema encoding_schema() const override;

  [[nodiscard]] const PdptwInstance& instance() const { return *instance_; }
  [[nodiscard]] const PdptwSolution& current() const { return current_; }
  void set_current(PdptwSolution solution) { current_ = std::move(solution); }

 private:
  std::shared_ptr<const PdptwInstance> instance_;
  PdptwSolution current_;
  PdptwSolution best_;
};

}  // namespace nbsel::pdptw
