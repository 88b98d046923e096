#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nbsel/search_model.hpp"

namespace nbsel::tsp {

struct TspInstance {
  std::string name;
  std::size_t n = 0;
  std::vector<double> distances;  // n x n, row-major
  std::vector<std::pair<double, double>> coords;  // empty for EXPLICIT instances
  std::optional<double> best_known;

  [[nodiscard]] double d(std::size_t i, std::size_t j) const {
    return distances[i * n + j];
  }
  [[nodiscard]] double max_distance() const;
  /// Per-unrouted-city penalty n * max(D) + 1; larger than any tour length.
  [[nodiscard]] double unrouted_penalty() const;
};

/// Partial tour: `path` and `unrouted` partition the city set.
struct TspSolution {
  std::vector<std::size_t> path;
  std::vector<std::size_t> unrouted;  // kept sorted

  static TspSolution empty(std::size_t n);
  friend bool operator==(const TspSolution&, const TspSolution&) = default;
};

enum TspOperator : OperatorId { kInsert = 0, kMove = 1, kTwoOpt = 2 };
inline constexpr std::size_t kOperatorCount = 3;

TspInstance make_instance(std::vector<double> distances, std::size_t n,
                          std::string name = "matrix");
TspInstance make_euclidean_instance(std::vector<std::pair<double, double>> coords,
                                    std::string name = "euc2d");

double tour_length(const TspInstance& instance, const std::vector<std::size_t>& path);
ObjectiveValue objective(const TspInstance& instance, const TspSolution& solution);

MoveOutcome op_insert(const TspInstance& instance, TspSolution& solution);
MoveOutcome op_move_node(const TspInstance& instance, TspSolution& solution);
MoveOutcome op_two_opt(const TspInstance& instance, TspSolution& solution);

/// Supports EUC_2D, CEIL_2D and EXPLICIT/FULL_MATRIX.
TspInstance parse_tsplib(std::string_view text);
TspInstance load_tsplib(const std::string& path);

GraphEncoding encode_state(const TspInstance& instance, const TspSolution& solution);

class TspModel final : public SearchModel {
 public:
  explicit TspModel(std::shared_ptr<const TspInstance> instance);

  [[nodiscard]] ProblemKind kind() const override { return ProblemKind::kTsp; }
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

  [[nodiscard]] const TspInstance& instance() const { return *instance_; }
  [[nodiscard]] const TspSolution& current() const { return current_; }
  void set_current(TspSolution solution) { current_ = std::move(solution); }

 private:
  std::shared_ptr<const TspInstance> instance_;
  TspSolution current_;
  TspSolution best_;
};

}  // namespace nbsel::tsp
