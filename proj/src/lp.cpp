#include "conbandit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conbandit/errors.hpp"

namespace conbandit {

SelectionVector::SelectionVector(std::vector<double> probs) : probs_(std::move(probs)) {
  double total = 0.0;
  for (double& p : probs_) {
    if (p < 0.0 && p >= -lp_tolerance::kClampToZero) p = 0.0;
    if (!(p >= 0.0)) throw ContractViolation("selection entries must be nonnegative");
    total += p;
  }
  if (!probs_.empty() && std::abs(total - 1.0) > lp_tolerance::kFeasibility) {
    throw ContractViolation("selection must sum to 1 (got " + std::to_string(total) + ")");
  }
}

SelectionVector SelectionVector::one_hot(std::size_t num_arms, std::size_t arm) {
  if (arm >= num_arms) throw ContractViolation("one_hot arm out of range");
  std::vector<double> p(num_arms, 0.0);
  p[arm] = 1.0;
  return SelectionVector(std::move(p));
}

SelectionVector SelectionVector::uniform(std::size_t num_arms) {
  if (num_arms == 0) throw ContractViolation("uniform selection needs at least one arm");
  return SelectionVector(std::vector<double>(num_arms, 1.0 / static_cast<double>(num_arms)));
}

std::vector<std::size_t> SelectionVector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    if (probs_[k] > 0.0) out.push_back(k);
  }
  return out;
}

void validate(const LpInstance& instance) {
  if (instance.success_probs.size() != instance.rates.size()) {
    throw ContractViolation("success_probs has length " +
                            std::to_string(instance.success_probs.size()) + ", expected " +
                            std::to_string(instance.rates.size()));
  }
  for (double mu : instance.success_probs) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw ContractViolation("success probability outside [0,1]");
  }
  if (!(instance.threshold >= 0.0 && instance.threshold <= 1.0)) {
    throw ContractViolation("threshold outside [0,1]");
  }
}

double lp_value(const SelectionVector& selection, const LpInstance& instance) {
  if (selection.size() != instance.rates.size() ||
      instance.success_probs.size() != instance.rates.size()) {
    throw ContractViolation("lp_value: selection/instance size mismatch");
  }
  double value = 0.0;
  for (std::size_t k = 0; k < selection.size(); ++k) {
    value += selection[k] * instance.rates[k] * instance.success_probs[k];
  }
  return value;
}

double success_mass(const SelectionVector& selection, std::span<const double> success_probs) {
  if (selection.size() != success_probs.size()) {
    throw ContractViolation("success_mass: size mismatch");
  }
  double mass = 0.0;
  for (std::size_t k = 0; k < selection.size(); ++k) mass += selection[k] * success_probs[k];
  return mass;
}

namespace {

struct Vertex {
  std::size_t first = 0;
  std::size_t second = 0;  // == first for a pure vertex
  double weight_first = 1.0;
  double objective = 0.0;

  bool pure() const { return first == second; }
};

// Sorted supports compared lexicographically; {i} precedes {i, j}.
bool support_less(const Vertex& a, const Vertex& b) {
  if (a.first != b.first) return a.first < b.first;
  if (a.pure() != b.pure()) return a.pure();
  return a.second < b.second;
}

}  // namespace

std::optional<LpSolution> solve_rate_lp(const LpInstance& instance) {
  validate(instance);
  const auto& mu = instance.success_probs;
  const auto& rates = instance.rates;
  const double tau = instance.threshold;
  const std::size_t num_arms = rates.size();

  std::optional<Vertex> best;
  auto consider = [&best](const Vertex& v) {
    if (!best) {
      best = v;
      return;
    }
    const double tol = 1e-12 * std::max(1.0, std::abs(best->objective));
    if (v.objective > best->objective + tol ||
        (v.objective >= best->objective - tol && support_less(v, *best))) {
      best = v;
    }
  };

  for (std::size_t k = 0; k < num_arms; ++k) {
    if (mu[k] >= tau) consider(Vertex{k, k, 1.0, rates[k] * mu[k]});
  }
  if (!best) return std::nullopt;

  for (std::size_t i = 0; i < num_arms; ++i) {
    if (!(mu[i] > tau)) continue;
    for (std::size_t j = 0; j < num_arms; ++j) {
      if (!(mu[j] < tau)) continue;
      const double yi = (tau - mu[j]) / (mu[i] - mu[j]);
      const double yj = 1.0 - yi;
      const double objective = yi * rates[i] * mu[i] + yj * rates[j] * mu[j];
      if (i < j) {
        consider(Vertex{i, j, yi, objective});
      } else {
        consider(Vertex{j, i, yj, objective});
      }
    }
  }

  std::vector<double> probs(num_arms, 0.0);
  if (best->pure()) {
    probs[best->first] = 1.0;
  } else {
    probs[best->first] = best->weight_first;
    probs[best->second] = 1.0 - best->weight_first;
  }
  LpSolution solution{SelectionVector(std::move(probs)), 0.0};
  solution.objective = lp_value(solution.selection, instance);
  return solution;
}

}  // namespace conbandit
