#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nbsel/search_model.hpp"

namespace nbsel::csp {

struct RatioConstraint {
  std::size_t p = 1;  // at most p cars with the option ...
  std::size_t q = 1;  // ... in any q consecutive positions

  friend bool operator==(const RatioConstraint&, const RatioConstraint&) = default;
};

struct CarClass {
  std::size_t count = 0;
  std::vector<bool> options;
};

struct CspInstance {
  std::string name;
  std::size_t n = 0;
  std::vector<RatioConstraint> options;
  std::vector<CarClass> classes;
  std::vector<std::size_t> car_of_index;  // class of each car, classes expanded in order
  std::optional<double> best_known;

  [[nodiscard]] bool requires_option(std::size_t car_class, std::size_t option) const {
    return classes[car_class].options[option];
  }
};

CspInstance build_instance(std::string name, std::vector<RatioConstraint> options,
                           std::vector<CarClass> classes);

/// Sequence of car classes; a permutation of the instance's class multiset.
struct CspSolution {
  std::vector<std::size_t> sequence;
  friend bool operator==(const CspSolution&, const CspSolution&) = default;
};

/// Sum over options and over every full window of q_o consecutive positions
/// of max(0, count - p_o).
ObjectiveValue objective(const CspInstance& instance, const CspSolution& solution);

enum CspOperator : OperatorId { kSwap = 0, kMoveCar = 1, kFlipSubseq = 2, kSwapSubseq = 3 };
inline constexpr std::size_t kOperatorCount = 4;
inline constexpr std::size_t kMaxSubseqLength = 10;

MoveOutcome op_swap(const CspInstance& instance, CspSolution& solution);
MoveOutcome op_move_car(const CspInstance& instance, CspSolution& solution);
MoveOutcome op_flip_subseq(const CspInstance& instance, CspSolution& solution);
MoveOutcome op_swap_subseq(const CspInstance& instance, CspSolution& solution);

/// CSPLib prob001 data format.
CspInstance parse_csplib(std::string_view text, std::string name = "csplib");
CspInstance load_csplib(const std::string& path);

MatrixEncoding encode_state(const CspInstance& instance, const CspSolution& solution);

CspSolution random_solution(const CspInstance& instance, Rng& rng);

class CspModel final : public SearchModel {
 public:
  /// Starts from the instance's class order; the engine restarts before use.
  explicit CspModel(std::shared_ptr<const CspInstance> instance);

  [[nodiscard]] ProblemKind kind() const override { return ProblemKind::kCsp; }
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

  [[nodiscard]] const CspInstance& instance() const { return *instance_; }
  [[nodiscard]] const CspSolution& current() const { return current_; }
  void set_current(CspSolution solution) { current_ = std::move(solution); }

 private:
  std::shared_ptr<const CspInstance> instance_;
  CspSolution current_;
  CspSolution best_;
};

}  // namespace nbsel::csp
