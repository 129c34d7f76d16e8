#include "conbandit/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "conbandit/config.hpp"
#include "conbandit/errors.hpp"

namespace conbandit {

using nlohmann::json;

std::string format_float(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string series_csv(const PolicySeries& s) {
  const bool with_ma = !s.ma_tput_mean.empty();
  std::string out =
      "t,cum_expected_tput_mean,cum_expected_tput_se,cum_violation_mean,cum_violation_se,"
      "ratio_mean,ratio_clamped,cum_regret_mean,cum_regret_se";
  if (with_ma) out += ",ma_tput_mean,ma_violation_mean";
  out += '\n';

  for (std::size_t i = 0; i < s.cum_tput_mean.size(); ++i) {
    out += std::to_string(i + 1);
    for (double v : {s.cum_tput_mean[i], s.cum_tput_se[i], s.cum_violation_mean[i],
                     s.cum_violation_se[i], s.ratio_mean[i]}) {
      out += ',';
      out += format_float(v);
    }
    out += s.ratio_clamped[i] ? ",1" : ",0";
    for (double v : {s.cum_regret_mean[i], s.cum_regret_se[i]}) {
      out += ',';
      out += format_float(v);
    }
    if (with_ma) {
      out += ',';
      out += format_float(s.ma_tput_mean[i]);
      out += ',';
      out += format_float(s.ma_violation_mean[i]);
    }
    out += '\n';
  }
  return out;
}

std::string series_file_name(std::string_view environment, std::string_view policy) {
  return std::string(environment) + "_" + std::string(policy) + ".csv";
}

std::string summary_json(const AggregatedResults& results, const ExperimentConfig& config) {
  const EnvironmentSchedule schedule = make_environment(config.environment);
  const std::size_t num_arms = schedule.num_arms();
  const double r_max = schedule.rates().max_rate();
  const TheoremBounds bounds = theorem_bounds(num_arms, config.horizon, r_max);

  json policies = json::array();
  for (const auto& s : results.policies) {
    const std::size_t last = s.cum_tput_mean.size() - 1;
    json row = {{"policy", s.policy},
                {"cum_expected_tput_mean", s.cum_tput_mean[last]},
                {"cum_expected_tput_se", s.cum_tput_se[last]},
                {"cum_violation_mean", s.cum_violation_mean[last]},
                {"cum_violation_se", s.cum_violation_se[last]},
                {"ratio_mean", s.ratio_mean[last]},
                {"ratio_clamped", s.ratio_clamped[last] != 0},
                {"cum_regret_mean", s.cum_regret_mean[last]},
                {"cum_regret_se", s.cum_regret_se[last]}};
    if (!s.ma_tput_mean.empty()) {
      row["ma_tput_mean"] = s.ma_tput_mean[last];
      row["ma_violation_mean"] = s.ma_violation_mean[last];
    }
    policies.push_back(std::move(row));
  }

  json doc = {{"environment", results.environment},
              {"K", num_arms},
              {"T", config.horizon},
              {"runs", config.runs},
              {"tau", config.tau},
              {"r_max", r_max},
              {"regret_baseline", schedule.stationary() ? "stationary" : "dynamic per-interval"},
              {"theorem_bounds",
               {{"violation_leading_term", bounds.violation_leading_term},
                {"regret", bounds.regret},
                {"note", "violation figure omits the O(K^2 log T sqrt(T)) remainder"}}},
              {"policies", policies}};
  return doc.dump(2) + "\n";
}

std::string metadata_json(const ExperimentConfig& config) {
  json doc = {{"config", json::parse(config_to_json(config))},
              {"generator", std::string(kGeneratorName)},
              {"seed_derivation",
               "policy stream: derive_seed(base_seed, \"policy:<name>\", run); channel stream: "
               "derive_seed(base_seed, \"environment\", run) when common_random_numbers"},
              {"common_random_numbers", config.common_random_numbers}};
  return doc.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

void write_outputs(const AggregatedResults& results, const ExperimentConfig& config,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& s : results.policies) {
    write_file(dir / series_file_name(results.environment, s.policy), series_csv(s));
  }
  write_file(dir / "summary.json", summary_json(results, config));
  write_file(dir / "metadata.json", metadata_json(config));
}

}  // namespace conbandit
