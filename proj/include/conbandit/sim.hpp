#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conbandit/env.hpp"
#include "conbandit/metrics.hpp"
#include "conbandit/policies.hpp"

namespace conbandit {

struct EnvironmentConfig {
  /// A preset name or "nonstationary" (case-insensitive).
  std::string name = "gradual";
  /// Anchor presets for "nonstationary"; empty means gradual, lossy, steep, gradual.
  std::vector<std::string> anchors;
  std::size_t segment_len = 250;
};

struct ExperimentConfig {
  EnvironmentConfig environment;
  std::vector<std::string> policies{"con-ts", "uts", "con-kl-ucb"};
  std::uint64_t horizon = 10000;
  std::uint64_t runs = 64;
  std::uint64_t base_seed = 1;
  double tau = 0.75;
  /// Sliding-window size applied to every policy without its own "@W" suffix.
  std::optional<std::size_t> window;
  /// Trailing window for the moving-average output columns.
  std::optional<std::size_t> ma_window;
  /// Share the channel random stream across policies within a run.
  bool common_random_numbers = true;
  std::string output_dir = "out";

  /// Throws ConfigError on out-of-range values or unknown names.
  void validate() const;
};

inline const std::vector<std::string> kDefaultAnchors{"gradual", "lossy", "steep", "gradual"};

EnvironmentSchedule make_environment(const EnvironmentConfig& config);

/// Seeds for the two independent substreams of one run.
struct RunSeeds {
  std::uint64_t policy;
  std::uint64_t environment;
};

RunSeeds run_seeds(const ExperimentConfig& config, std::string_view policy_name,
                   std::uint64_t run_index);

/// Called after every interval with the record and the decision behind it.
using StepObserver = std::function<void(const StepRecord&, const PolicyDecision&)>;

MetricsLog run_single(const ExperimentConfig& config, std::string_view policy_name,
                      std::uint64_t run_index, const StepObserver& observer = {});

MetricsLog run_single(const ExperimentConfig& config, const EnvironmentSchedule& schedule,
                      std::string_view policy_name, std::uint64_t run_index,
                      const StepObserver& observer = {});

/// Across-run statistics for one policy; every vector has length T.
struct PolicySeries {
  std::string policy;
  std::vector<double> cum_tput_mean;
  std::vector<double> cum_tput_se;
  std::vector<double> cum_violation_mean;
  std::vector<double> cum_violation_se;
  /// mean throughput / max(mean violation, 1e-9)
  std::vector<double> ratio_mean;
  std::vector<std::uint8_t> ratio_clamped;
  std::vector<double> cum_regret_mean;
  std::vector<double> cum_regret_se;
  /// Trailing moving averages of cum_tput_mean / cum_violation_mean over
  /// ma_window intervals. Present only when ma_window is set.
  std::vector<double> ma_tput_mean;
  std::vector<double> ma_violation_mean;

  /// ma_tput_mean / max(ma_violation_mean, 1e-9) at index i.
  double ma_ratio(std::size_t i) const;
};

struct AggregatedResults {
  std::string environment;
  std::uint64_t horizon = 0;
  std::uint64_t runs = 0;
  std::vector<PolicySeries> policies;

  const PolicySeries& find(std::string_view policy) const;
};

/// Runs every (policy, run) pair, fanning runs out over `threads` workers
/// (0 = hardware concurrency). Reduction is in run-index order, so the result
/// does not depend on the thread count.
AggregatedResults run_experiment(const ExperimentConfig& config, unsigned threads = 0);

}  // namespace conbandit
