/* C interface to the conbandit library: latency-constrained rate selection
 * with constrained Thompson sampling, the UTS and Con-KL-UCB baselines, and
 * the experiment runner.
 *
 * Every fallible call returns a cb_status. On failure a description is
 * available from cb_last_error() until the next failing call on the same
 * thread. Handles are opaque and owned by the caller; release them with the
 * matching *_destroy function.
 */
#ifndef CONBANDIT_H
#define CONBANDIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CONBANDIT_BUILDING_LIBRARY)
#define CB_API __declspec(dllexport)
#else
#define CB_API __declspec(dllimport)
#endif
#else
#define CB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum cb_status {
  CB_OK = 0,
  CB_ERR_INTERNAL = 1,
  CB_ERR_CONFIG = 2,
  CB_ERR_INFEASIBLE = 3
} cb_status;

typedef enum cb_lp_method { CB_LP_VERTEX = 0, CB_LP_SIMPLEX = 1 } cb_lp_method;

typedef struct cb_policy cb_policy;
typedef struct cb_experiment cb_experiment;

typedef struct cb_final_metrics {
  double cum_expected_tput;
  double cum_violation;
  double ratio;
  int ratio_clamped;
  double cum_regret;
} cb_final_metrics;

CB_API const char* cb_version(void);
CB_API const char* cb_last_error(void);

/* Rate-selection LP. selection_out must hold num_arms doubles. Returns
 * CB_ERR_INFEASIBLE when every success probability is below tau. */
CB_API cb_status cb_lp_solve(const double* rates, const double* success_probs, size_t num_arms,
                             double tau, cb_lp_method method, double* selection_out,
                             double* objective_out);

/* Built-in environments. Names are "gradual", "lossy", "steep", "linear". */
CB_API size_t cb_preset_count(void);
CB_API const char* cb_preset_name(size_t index);
/* Copies up to capacity values; *num_arms receives the full count. */
CB_API cb_status cb_preset_success_probs(const char* name, double* out, size_t capacity,
                                         size_t* num_arms);
CB_API cb_status cb_default_rates(double* out, size_t capacity, size_t* num_arms);

/* Stateful policy: name is "con-ts", "uts" or "con-kl-ucb", optionally with
 * an "@W" window suffix; window > 0 applies a sliding window when the name
 * carries none. */
CB_API cb_status cb_policy_create(const char* name, const double* rates, size_t num_arms,
                                  double tau, size_t window, uint64_t seed, cb_policy** out);
/* selection_out may be NULL; otherwise it must hold num_arms doubles. */
CB_API cb_status cb_policy_select(cb_policy* policy, double* selection_out, size_t* chosen_arm,
                                  int* fallback_used);
CB_API cb_status cb_policy_update(cb_policy* policy, size_t arm, int outcome);
CB_API void cb_policy_destroy(cb_policy* policy);

/* Experiments are described by a JSON config document. */
CB_API cb_status cb_experiment_create(const char* config_json, cb_experiment** out);
/* The fully resolved config as JSON; valid while the handle lives. */
CB_API const char* cb_experiment_config(const cb_experiment* experiment);
/* threads == 0 uses every hardware thread. */
CB_API cb_status cb_experiment_run(cb_experiment* experiment, unsigned threads);
/* output_dir == NULL writes to the config's output_dir. Requires a prior run. */
CB_API cb_status cb_experiment_write(const cb_experiment* experiment, const char* output_dir);
CB_API size_t cb_experiment_policy_count(const cb_experiment* experiment);
CB_API const char* cb_experiment_policy_name(const cb_experiment* experiment, size_t index);
CB_API cb_status cb_experiment_final(const cb_experiment* experiment, size_t index,
                                     cb_final_metrics* out);
CB_API void cb_experiment_destroy(cb_experiment* experiment);

#ifdef __cplusplus
}
#endif

#endif /* CONBANDIT_H */
