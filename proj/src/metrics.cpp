#include "conbandit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "conbandit/errors.hpp"

namespace conbandit {

namespace {

void check_upto(const MetricsLog& log, std::uint64_t upto) {
  if (upto < 1 || upto > log.horizon()) throw ContractViolation("upto must lie in [1, T]");
}

}  // namespace

double optimal_throughput(const RateTable& rates, std::span<const double> mu, double tau) {
  if (auto solution = solve_rate_lp(LpInstance{rates, mu, tau})) return solution->objective;
  const auto best = std::max_element(mu.begin(), mu.end());
  const auto k = static_cast<std::size_t>(best - mu.begin());
  return rates[k] * mu[k];
}

double violation(const MetricsLog& log, std::uint64_t upto) {
  check_upto(log, upto);
  double success = 0.0;
  for (std::uint64_t t = 0; t < upto; ++t) success += log.records[t].expected_success;
  return std::max(0.0, static_cast<double>(upto) * log.tau - success);
}

double regret(const MetricsLog& log, std::uint64_t upto) {
  check_upto(log, upto);
  double loss = 0.0;
  for (std::uint64_t t = 0; t < upto; ++t) {
    loss += log.records[t].optimal_tput - log.records[t].expected_tput;
  }
  return std::max(0.0, loss);
}

double cumulative_throughput(const MetricsLog& log, std::uint64_t upto) {
  check_upto(log, upto);
  double total = 0.0;
  for (std::uint64_t t = 0; t < upto; ++t) total += log.records[t].expected_tput;
  return total;
}

RatioResult throughput_violation_ratio(double cumulative_tput, double cumulative_violation) {
  RatioResult r;
  r.numerator = cumulative_tput;
  r.denominator = cumulative_violation;
  r.clamped = cumulative_violation < kRatioEpsilon;
  r.ratio = cumulative_tput / std::max(cumulative_violation, kRatioEpsilon);
  return r;
}

RatioResult tput_violation_ratio(const MetricsLog& log, std::uint64_t upto) {
  return throughput_violation_ratio(cumulative_throughput(log, upto), violation(log, upto));
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
  if (window == 0) throw ContractViolation("moving average window must be >= 1");
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t begin = i + 1 > window ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = begin; j <= i; ++j) sum += series[j];
    out[i] = sum / static_cast<double>(i + 1 - begin);
  }
  return out;
}

ConfidenceBounds confidence_bounds(double mu_hat, std::uint64_t n, std::uint64_t horizon,
                                   std::size_t num_arms) {
  if (horizon == 0 || num_arms == 0) throw ContractViolation("horizon and K must be >= 1");
  if (n == 0) return {1.0, 0.0};
  const double nd = static_cast<double>(n);
  const double x = static_cast<double>(horizon) * static_cast<double>(num_arms) / nd;
  const double log_plus = x >= 1.0 ? std::log(x) : 0.0;
  const double radius = std::sqrt(log_plus / nd);
  return {std::min(1.0, mu_hat + radius), std::max(0.0, mu_hat - radius)};
}

TheoremBounds theorem_bounds(std::size_t num_arms, std::uint64_t horizon, double r_max) {
  const double kt = static_cast<double>(num_arms) * static_cast<double>(horizon);
  const double log_k = std::log(static_cast<double>(std::max<std::size_t>(num_arms, 1)));
  TheoremBounds b;
  b.violation_leading_term = 12.0 * std::sqrt(kt);
  b.regret = r_max * (6.0 * std::sqrt(kt) + 12.0 * std::sqrt(kt * log_k));
  return b;
}

CumulativeSeries cumulative_series(const MetricsLog& log) {
  const std::size_t horizon = log.horizon();
  CumulativeSeries s;
  s.throughput.resize(horizon);
  s.violation.resize(horizon);
  s.regret.resize(horizon);
  double tput = 0.0;
  double success = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const auto& r = log.records[i];
    tput += r.expected_tput;
    success += r.expected_success;
    loss += r.optimal_tput - r.expected_tput;
    s.throughput[i] = tput;
    s.violation[i] = std::max(0.0, static_cast<double>(i + 1) * log.tau - success);
    s.regret[i] = std::max(0.0, loss);
  }
  return s;
}

}  // namespace conbandit
