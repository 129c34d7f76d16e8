#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "conbandit/lp.hpp"
#include "conbandit/rate_table.hpp"

namespace conbandit {

/// One transmission interval of a run.
struct StepRecord {
  std::uint64_t t = 0;
  SelectionVector selection;     // p_k(t)
  std::size_t chosen_arm = 0;    // k(t)
  bool outcome = false;          // x_k(t)
  double expected_tput = 0.0;    // sum_k p_k(t) r_k mu_k(t), Mbps
  double expected_success = 0.0; // sum_k p_k(t) mu_k(t)
  double optimal_tput = 0.0;     // LP optimum on the true mu(t), Mbps
  double realized_tput = 0.0;    // r_k(t) x_k(t); diagnostics only
};

/// Records are indexed t = 1..T contiguously (records[i].t == i + 1).
struct MetricsLog {
  std::vector<StepRecord> records;
  double tau = 0.0;
  RateTable rates;

  std::size_t horizon() const noexcept { return records.size(); }
};

/// Optimal expected throughput on the true mu. When no arm reaches tau the
/// benchmark is the pure arm with the highest success probability.
double optimal_throughput(const RateTable& rates, std::span<const double> mu, double tau);

/// [T' tau - sum_{t<=T'} expected_success(t)]_+
double violation(const MetricsLog& log, std::uint64_t upto);

/// [sum_{t<=T'} (optimal_tput(t) - expected_tput(t))]_+
double regret(const MetricsLog& log, std::uint64_t upto);

/// sum_{t<=T'} expected_tput(t)
double cumulative_throughput(const MetricsLog& log, std::uint64_t upto);

inline constexpr double kRatioEpsilon = 1e-9;

struct RatioResult {
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;  // unclamped violation
  bool clamped = false;      // denominator was below kRatioEpsilon
};

/// Throughput-violation ratio from raw numerator and violation.
RatioResult throughput_violation_ratio(double cumulative_tput, double cumulative_violation);

RatioResult tput_violation_ratio(const MetricsLog& log, std::uint64_t upto);

/// Element i is the mean of the trailing min(i + 1, window) values.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

struct ConfidenceBounds {
  double upper = 1.0;
  double lower = 0.0;
};

/// mu_hat +/- sqrt(log+(T K / n) / n), clipped to [0, 1]. n = 0 gives (1, 0).
ConfidenceBounds confidence_bounds(double mu_hat, std::uint64_t n, std::uint64_t horizon,
                                   std::size_t num_arms);

struct TheoremBounds {
  double violation_leading_term = 0.0;  // 12 sqrt(K T); remainder term not included
  double regret = 0.0;                  // r_max (6 sqrt(K T) + 12 sqrt(K T log K))
};

TheoremBounds theorem_bounds(std::size_t num_arms, std::uint64_t horizon, double r_max);

/// Per-t cumulative quantities for t = 1..T, computed with the same
/// left-to-right summation as violation()/regret().
struct CumulativeSeries {
  std::vector<double> throughput;
  std::vector<double> violation;
  std::vector<double> regret;
};

CumulativeSeries cumulative_series(const MetricsLog& log);

}  // namespace conbandit
