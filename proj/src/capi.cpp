#include "conbandit/conbandit.h"

#include <memory>
#include <optional>
#include <string>

#include "conbandit/config.hpp"
#include "conbandit/env.hpp"
#include "conbandit/errors.hpp"
#include "conbandit/lp.hpp"
#include "conbandit/policies.hpp"
#include "conbandit/report.hpp"
#include "conbandit/sim.hpp"

struct cb_policy {
  std::unique_ptr<conbandit::Policy> policy;
  conbandit::Rng rng;
};

struct cb_experiment {
  conbandit::ExperimentConfig config;
  std::string config_json;
  std::optional<conbandit::AggregatedResults> results;
};

namespace {

thread_local std::string last_error;

cb_status fail(cb_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Fn>
cb_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const conbandit::ConfigError& e) {
    return fail(CB_ERR_CONFIG, e.what());
  } catch (const conbandit::ContractViolation& e) {
    return fail(CB_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(CB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CB_ERR_INTERNAL, "unknown error");
  }
}

constexpr std::size_t kPresetCount = std::size(conbandit::kAllPresets);

}  // namespace

extern "C" {

const char* cb_version(void) { return "1.0.0"; }

const char* cb_last_error(void) { return last_error.c_str(); }

cb_status cb_lp_solve(const double* rates, const double* success_probs, size_t num_arms,
                      double tau, cb_lp_method method, double* selection_out,
                      double* objective_out) {
  return guarded([&] {
    if (!rates || !success_probs || !selection_out || num_arms == 0) {
      return fail(CB_ERR_CONFIG, "cb_lp_solve: null pointer or zero arms");
    }
    const conbandit::RateTable table(std::vector<double>(rates, rates + num_arms));
    const conbandit::LpInstance instance{table, {success_probs, num_arms}, tau};
    const auto solution = method == CB_LP_SIMPLEX ? conbandit::simplex_solve(instance)
                                                  : conbandit::solve_rate_lp(instance);
    if (!solution) return fail(CB_ERR_INFEASIBLE, "infeasible: every success probability < tau");
    for (size_t k = 0; k < num_arms; ++k) selection_out[k] = solution->selection[k];
    if (objective_out) *objective_out = solution->objective;
    return CB_OK;
  });
}

size_t cb_preset_count(void) { return kPresetCount; }

const char* cb_preset_name(size_t index) {
  if (index >= kPresetCount) return nullptr;
  return conbandit::to_string(conbandit::kAllPresets[index]).data();
}

cb_status cb_preset_success_probs(const char* name, double* out, size_t capacity,
                                  size_t* num_arms) {
  return guarded([&] {
    if (!name) return fail(CB_ERR_CONFIG, "preset name is null");
    const auto& mu = conbandit::preset_success_probs(conbandit::parse_preset(name));
    for (size_t k = 0; k < mu.size() && k < capacity && out; ++k) out[k] = mu[k];
    if (num_arms) *num_arms = mu.size();
    return CB_OK;
  });
}

cb_status cb_default_rates(double* out, size_t capacity, size_t* num_arms) {
  const auto rates = conbandit::wifi_rates();
  for (size_t k = 0; k < rates.size() && k < capacity && out; ++k) out[k] = rates[k];
  if (num_arms) *num_arms = rates.size();
  return CB_OK;
}

cb_status cb_policy_create(const char* name, const double* rates, size_t num_arms, double tau,
                           size_t window, uint64_t seed, cb_policy** out) {
  return guarded([&] {
    if (!name || !rates || !out) return fail(CB_ERR_CONFIG, "cb_policy_create: null argument");
    std::optional<std::size_t> default_window;
    if (window > 0) default_window = window;
    const auto spec = conbandit::PolicySpec::parse(name, default_window);
    conbandit::RateTable table(std::vector<double>(rates, rates + num_arms));
    *out = new cb_policy{conbandit::make_policy(spec, table, tau), conbandit::Rng(seed)};
    return CB_OK;
  });
}

cb_status cb_policy_select(cb_policy* policy, double* selection_out, size_t* chosen_arm,
                           int* fallback_used) {
  return guarded([&] {
    if (!policy) return fail(CB_ERR_CONFIG, "null policy handle");
    const auto decision = policy->policy->select(policy->rng);
    if (selection_out) {
      for (size_t k = 0; k < decision.selection.size(); ++k) selection_out[k] = decision.selection[k];
    }
    if (chosen_arm) *chosen_arm = decision.chosen_arm;
    if (fallback_used) *fallback_used = decision.fallback_used ? 1 : 0;
    return CB_OK;
  });
}

cb_status cb_policy_update(cb_policy* policy, size_t arm, int outcome) {
  return guarded([&] {
    if (!policy) return fail(CB_ERR_CONFIG, "null policy handle");
    if (outcome != 0 && outcome != 1) return fail(CB_ERR_CONFIG, "outcome must be 0 or 1");
    policy->policy->update(arm, outcome == 1);
    return CB_OK;
  });
}

void cb_policy_destroy(cb_policy* policy) { delete policy; }

cb_status cb_experiment_create(const char* config_json, cb_experiment** out) {
  return guarded([&] {
    if (!config_json || !out) return fail(CB_ERR_CONFIG, "cb_experiment_create: null argument");
    auto config = conbandit::parse_config(config_json);
    auto json = conbandit::config_to_json(config);
    *out = new cb_experiment{std::move(config), std::move(json), std::nullopt};
    return CB_OK;
  });
}

const char* cb_experiment_config(const cb_experiment* experiment) {
  return experiment ? experiment->config_json.c_str() : nullptr;
}

cb_status cb_experiment_run(cb_experiment* experiment, unsigned threads) {
  return guarded([&] {
    if (!experiment) return fail(CB_ERR_CONFIG, "null experiment handle");
    experiment->results = conbandit::run_experiment(experiment->config, threads);
    return CB_OK;
  });
}

cb_status cb_experiment_write(const cb_experiment* experiment, const char* output_dir) {
  return guarded([&] {
    if (!experiment) return fail(CB_ERR_CONFIG, "null experiment handle");
    if (!experiment->results) return fail(CB_ERR_INTERNAL, "experiment has not been run");
    conbandit::write_outputs(*experiment->results, experiment->config,
                             output_dir ? output_dir : experiment->config.output_dir);
    return CB_OK;
  });
}

size_t cb_experiment_policy_count(const cb_experiment* experiment) {
  if (!experiment || !experiment->results) return 0;
  return experiment->results->policies.size();
}

const char* cb_experiment_policy_name(const cb_experiment* experiment, size_t index) {
  if (index >= cb_experiment_policy_count(experiment)) return nullptr;
  return experiment->results->policies[index].policy.c_str();
}

cb_status cb_experiment_final(const cb_experiment* experiment, size_t index,
                              cb_final_metrics* out) {
  if (!out || index >= cb_experiment_policy_count(experiment)) {
    return fail(CB_ERR_CONFIG, "cb_experiment_final: bad index or experiment not run");
  }
  const auto& s = experiment->results->policies[index];
  const std::size_t last = s.cum_tput_mean.size() - 1;
  *out = cb_final_metrics{s.cum_tput_mean[last], s.cum_violation_mean[last], s.ratio_mean[last],
                          s.ratio_clamped[last], s.cum_regret_mean[last]};
  return CB_OK;
}

void cb_experiment_destroy(cb_experiment* experiment) { delete experiment; }

}  // extern "C"
