#pragma once

#include <filesystem>
#include <string>

#include "conbandit/sim.hpp"

namespace conbandit {

/// printf("%.9g"); the rendering used for every float in the CSV output.
std::string format_float(double value);

/// Header:
/// t,cum_expected_tput_mean,cum_expected_tput_se,cum_violation_mean,cum_violation_se,
/// ratio_mean,ratio_clamped,cum_regret_mean,cum_regret_se[,ma_tput_mean,ma_violation_mean]
std::string series_csv(const PolicySeries& series);

/// "{env}_{policy}.csv"
std::string series_file_name(std::string_view environment, std::string_view policy);

/// Final-T values per policy plus the theorem bounds for (K, T, r_max).
std::string summary_json(const AggregatedResults& results, const ExperimentConfig& config);

/// Fully resolved config plus generator details.
std::string metadata_json(const ExperimentConfig& config);

/// Writes one CSV per policy, summary.json and metadata.json into `dir`
/// (created if missing).
void write_outputs(const AggregatedResults& results, const ExperimentConfig& config,
                   const std::filesystem::path& dir);

}  // namespace conbandit
