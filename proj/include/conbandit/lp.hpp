#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "conbandit/rate_table.hpp"

namespace conbandit {

/// Probability distribution over arms (p_k). Entries are nonnegative and sum to one.
class SelectionVector {
 public:
  SelectionVector() = default;
  explicit SelectionVector(std::vector<double> probs);

  static SelectionVector one_hot(std::size_t num_arms, std::size_t arm);
  static SelectionVector uniform(std::size_t num_arms);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }
  std::span<const double> values() const noexcept { return probs_; }

  /// Indices with strictly positive mass, ascending.
  std::vector<std::size_t> support() const;

  friend bool operator==(const SelectionVector&, const SelectionVector&) = default;

 private:
  std::vector<double> probs_;
};

/// Data for the rate-selection LP:
///   maximize   sum_k y_k r_k mu_k
///   subject to sum_k y_k mu_k >= threshold, sum_k y_k = 1, y >= 0.
struct LpInstance {
  const RateTable& rates;
  std::span<const double> success_probs;
  double threshold;
};

struct LpSolution {
  SelectionVector selection;
  double objective = 0.0;  // Mbps
};

/// Throws ContractViolation unless success_probs has length K, entries and
/// threshold are in [0, 1].
void validate(const LpInstance& instance);

/// Exact optimum by vertex enumeration. Returns nullopt iff every success
/// probability is strictly below the threshold. Among optimal vertices the
/// one with lexicographically smallest support wins.
std::optional<LpSolution> solve_rate_lp(const LpInstance& instance);

/// Same LP through a dense two-phase simplex with Bland's rule. Kept as an
/// independent oracle for solve_rate_lp.
std::optional<LpSolution> simplex_solve(const LpInstance& instance);

/// sum_k selection[k] * rates[k] * success_probs[k].
double lp_value(const SelectionVector& selection, const LpInstance& instance);

/// sum_k selection[k] * success_probs[k].
double success_mass(const SelectionVector& selection, std::span<const double> success_probs);

namespace lp_tolerance {
inline constexpr double kFeasibility = 1e-9;
inline constexpr double kClampToZero = 1e-12;
}  // namespace lp_tolerance

}  // namespace conbandit
