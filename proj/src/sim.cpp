#include "conbandit/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "conbandit/errors.hpp"

namespace conbandit {

void ExperimentConfig::validate() const {
  if (horizon < 1) throw ConfigError("T must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in [0,1]");
  if (window && *window < 1) throw ConfigError("window must be >= 1");
  if (ma_window && *ma_window < 1) throw ConfigError("ma_window must be >= 1");
  if (policies.empty()) throw ConfigError("at least one policy is required");
  std::vector<std::string> names;
  for (const auto& p : policies) {
    names.push_back(PolicySpec::parse(p, window).name());
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw ConfigError("duplicate policy in list");
  }
  (void)make_environment(environment);
}

EnvironmentSchedule make_environment(const EnvironmentConfig& config) {
  std::string key(config.name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "nonstationary") {
    const auto& names = config.anchors.empty() ? kDefaultAnchors : config.anchors;
    std::vector<Preset> anchors;
    for (const auto& n : names) anchors.push_back(parse_preset(n));
    return interpolated(anchors, config.segment_len);
  }
  if (!config.anchors.empty()) {
    throw ConfigError("anchors are only meaningful for the nonstationary environment");
  }
  return preset(key);
}

RunSeeds run_seeds(const ExperimentConfig& config, std::string_view policy_name,
                   std::uint64_t run_index) {
  const std::string policy_label = "policy:" + std::string(policy_name);
  const std::string env_label = config.common_random_numbers
                                    ? std::string("environment")
                                    : "environment:" + std::string(policy_name);
  return {derive_seed(config.base_seed, policy_label, run_index),
          derive_seed(config.base_seed, env_label, run_index)};
}

MetricsLog run_single(const ExperimentConfig& config, std::string_view policy_name,
                      std::uint64_t run_index, const StepObserver& observer) {
  config.validate();
  return run_single(config, make_environment(config.environment), policy_name, run_index,
                    observer);
}

MetricsLog run_single(const ExperimentConfig& config, const EnvironmentSchedule& schedule,
                      std::string_view policy_name, std::uint64_t run_index,
                      const StepObserver& observer) {
  const PolicySpec spec = PolicySpec::parse(policy_name, config.window);
  const RateTable& rates = schedule.rates();
  auto policy = make_policy(spec, rates, config.tau);

  const RunSeeds seeds = run_seeds(config, spec.name(), run_index);
  Rng policy_rng(seeds.policy);
  Rng channel_rng(seeds.environment);

  const bool stationary = schedule.stationary();
  const double stationary_optimum =
      stationary ? optimal_throughput(rates, schedule.success_probs(1), config.tau) : 0.0;

  MetricsLog log{{}, config.tau, rates};
  log.records.reserve(config.horizon);
  for (std::uint64_t t = 1; t <= config.horizon; ++t) {
    const std::vector<double> mu = schedule.success_probs(t);
    PolicyDecision decision = policy->select(policy_rng);
    const bool outcome = draw_outcome(schedule, t, decision.chosen_arm, channel_rng);
    policy->update(decision.chosen_arm, outcome);

    const LpInstance truth{rates, mu, config.tau};
    StepRecord record;
    record.t = t;
    record.chosen_arm = decision.chosen_arm;
    record.outcome = outcome;
    record.expected_tput = lp_value(decision.selection, truth);
    record.expected_success = success_mass(decision.selection, mu);
    record.optimal_tput =
        stationary ? stationary_optimum : optimal_throughput(rates, mu, config.tau);
    record.realized_tput = outcome ? rates[decision.chosen_arm] : 0.0;
    record.selection = decision.selection;
    if (observer) observer(record, decision);
    log.records.push_back(std::move(record));
  }
  return log;
}

double PolicySeries::ma_ratio(std::size_t i) const {
  return throughput_violation_ratio(ma_tput_mean.at(i), ma_violation_mean.at(i)).ratio;
}

const PolicySeries& AggregatedResults::find(std::string_view policy) const {
  for (const auto& s : policies) {
    if (s.policy == policy) return s;
  }
  throw ContractViolation("no results for policy '" + std::string(policy) + "'");
}

namespace {

struct RunSeries {
  CumulativeSeries cumulative;
};

RunSeries summarize(const MetricsLog& log) { return RunSeries{cumulative_series(log)}; }

// Neumaier-compensated sum, accumulated in the order given.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <typename Extract>
void mean_and_se(const std::vector<RunSeries>& runs, std::size_t horizon, Extract extract,
                 std::vector<double>& mean, std::vector<double>& se) {
  const auto n = static_cast<double>(runs.size());
  mean.assign(horizon, 0.0);
  se.assign(horizon, 0.0);
  for (std::size_t t = 0; t < horizon; ++t) {
    CompensatedSum sum;
    for (const auto& r : runs) sum.add(extract(r)[t]);
    const double m = sum.value() / n;
    mean[t] = m;
    if (runs.size() > 1) {
      CompensatedSum sq;
      for (const auto& r : runs) {
        const double d = extract(r)[t] - m;
        sq.add(d * d);
      }
      se[t] = std::sqrt(sq.value() / (n - 1.0) / n);
    }
  }
}

PolicySeries aggregate(std::string policy, const std::vector<RunSeries>& runs,
                       const ExperimentConfig& config) {
  const std::size_t horizon = config.horizon;
  PolicySeries s;
  s.policy = std::move(policy);
  mean_and_se(
      runs, horizon, [](const RunSeries& r) -> const auto& { return r.cumulative.throughput; },
      s.cum_tput_mean, s.cum_tput_se);
  mean_and_se(
      runs, horizon, [](const RunSeries& r) -> const auto& { return r.cumulative.violation; },
      s.cum_violation_mean, s.cum_violation_se);
  mean_and_se(
      runs, horizon, [](const RunSeries& r) -> const auto& { return r.cumulative.regret; },
      s.cum_regret_mean, s.cum_regret_se);

  s.ratio_mean.resize(horizon);
  s.ratio_clamped.resize(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    const RatioResult r = throughput_violation_ratio(s.cum_tput_mean[t], s.cum_violation_mean[t]);
    s.ratio_mean[t] = r.ratio;
    s.ratio_clamped[t] = r.clamped ? 1 : 0;
  }

  if (config.ma_window) {
    s.ma_tput_mean = moving_average(s.cum_tput_mean, *config.ma_window);
    s.ma_violation_mean = moving_average(s.cum_violation_mean, *config.ma_window);
  }
  return s;
}

}  // namespace

AggregatedResults run_experiment(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  const EnvironmentSchedule schedule = make_environment(config.environment);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config.runs));

  AggregatedResults results;
  results.environment = schedule.name();
  results.horizon = config.horizon;
  results.runs = config.runs;

  for (const auto& raw_name : config.policies) {
    const std::string name = PolicySpec::parse(raw_name, config.window).name();
    std::vector<RunSeries> runs(config.runs);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
      for (;;) {
        const std::uint64_t run = next.fetch_add(1);
        if (run >= config.runs) return;
        try {
          runs[run] = summarize(run_single(config, schedule, name, run));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(config.runs);
          return;
        }
      }
    };

    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    results.policies.push_back(aggregate(name, runs, config));
  }
  return results;
}

}  // namespace conbandit
