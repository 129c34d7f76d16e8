#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conbandit/lp.hpp"
#include "conbandit/rate_table.hpp"
#include "conbandit/rng.hpp"

namespace conbandit {

/// Per-arm success/failure tallies over whatever history a policy learns from.
struct ArmCounts {
  std::vector<std::uint64_t> successes;
  std::vector<std::uint64_t> failures;

  explicit ArmCounts(std::size_t num_arms = 0) : successes(num_arms, 0), failures(num_arms, 0) {}

  std::size_t size() const noexcept { return successes.size(); }
  std::uint64_t pulls(std::size_t k) const { return successes[k] + failures[k]; }
  /// Empirical success rate; nullopt for an arm never played.
  std::optional<double> mean(std::size_t k) const;
  void record(std::size_t arm, bool outcome);

  friend bool operator==(const ArmCounts&, const ArmCounts&) = default;
};

/// Independent Beta(alpha_k, beta_k) beliefs over each arm's success probability.
struct BetaPosterior {
  std::vector<double> alpha;
  std::vector<double> beta;

  /// Beta(1, 1) on every arm.
  static BetaPosterior uniform_prior(std::size_t num_arms);
  /// (1 + successes, 1 + failures) per arm.
  static BetaPosterior from_counts(const ArmCounts& counts);

  std::size_t size() const noexcept { return alpha.size(); }

  friend bool operator==(const BetaPosterior&, const BetaPosterior&) = default;
};

struct PolicyDecision {
  SelectionVector selection;
  std::size_t chosen_arm = 0;
  bool fallback_used = false;
  /// Per-arm values the LP was solved with (posterior samples for Con-TS,
  /// KL-UCB indices for Con-KL-UCB). Empty for UTS.
  std::vector<double> lp_inputs;
};

struct Observation {
  std::size_t arm;
  bool outcome;
};

/// Bounded FIFO of the most recent observations; oldest evicted first.
class ObservationWindow {
 public:
  explicit ObservationWindow(std::size_t capacity);

  void push(std::size_t arm, bool outcome);
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::deque<Observation>& entries() const noexcept { return entries_; }

  /// Full recount of the window contents.
  ArmCounts recount(std::size_t num_arms) const;

 private:
  std::size_t capacity_;
  std::deque<Observation> entries_;
};

// Con-TS ---------------------------------------------------------------------

/// Draws one Beta sample per arm, solves the rate LP on the samples and
/// samples an arm from its solution. Falls back to a uniform selection when
/// no sample reaches tau. Consumes K Beta draws plus one uniform.
PolicyDecision con_ts_select(const BetaPosterior& posterior, const RateTable& rates, double tau,
                             Rng& rng);

void con_ts_update(BetaPosterior& posterior, std::size_t arm, bool outcome);

// Con-KL-UCB -----------------------------------------------------------------

/// Bernoulli KL divergence d(p, q); 0 log 0 := 0. Requires q in (0, 1).
double kl_bernoulli(double p, double q);

/// sup{ q in [mu_hat, 1) : n d(mu_hat, q) <= log t } by bisection to 1e-9.
/// Returns 1 for an unplayed arm.
double kl_ucb_index(double mu_hat, std::uint64_t n, std::uint64_t t);

PolicyDecision con_kl_ucb_select(const ArmCounts& counts, const RateTable& rates, double tau,
                                 std::uint64_t t, Rng& rng);

// UTS ------------------------------------------------------------------------

/// Forced-leader period on the rate line graph (gamma + 1 with gamma = 2).
inline constexpr std::uint64_t kUtsLeaderPeriod = 3;

/// Unimodal Thompson sampling on the path graph over rates. Updates
/// leader_count and always emits a one-hot selection.
PolicyDecision uts_select(const ArmCounts& counts, const RateTable& rates,
                          std::vector<std::uint64_t>& leader_count, Rng& rng);

// Sliding window -------------------------------------------------------------

/// Appends to the window and returns the posterior recomputed from it.
BetaPosterior windowed_update(ObservationWindow& window, std::size_t num_arms, std::size_t arm,
                              bool outcome);

// Stateful policies ----------------------------------------------------------

enum class PolicyKind { ConTs, Uts, ConKlUcb };

/// Parsed policy name: "con-ts", "uts" or "con-kl-ucb", optionally suffixed
/// with "@W" to learn from a sliding window of W observations.
struct PolicySpec {
  PolicyKind kind = PolicyKind::ConTs;
  std::optional<std::size_t> window;

  /// Throws ConfigError on an unknown name or a malformed window suffix.
  static PolicySpec parse(std::string_view name, std::optional<std::size_t> default_window = {});
  std::string name() const;
};

std::string_view to_string(PolicyKind kind);

/// Select/update state machine. Not thread-safe; one instance per run.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual PolicyDecision select(Rng& rng) = 0;
  void update(std::size_t arm, bool outcome);

  /// Counts the policy currently learns from (windowed when configured).
  const ArmCounts& counts() const noexcept { return counts_; }
  /// Number of completed select calls.
  std::uint64_t rounds() const noexcept { return rounds_; }
  std::size_t num_arms() const noexcept { return rates_.size(); }
  const RateTable& rates() const noexcept { return rates_; }
  double tau() const noexcept { return tau_; }

 protected:
  Policy(RateTable rates, double tau, std::optional<std::size_t> window);

  std::uint64_t next_round() noexcept { return ++rounds_; }
  std::optional<std::size_t> window_capacity() const;
  virtual void on_update(std::size_t arm, bool outcome) { (void)arm, (void)outcome; }

 private:
  RateTable rates_;
  double tau_;
  std::optional<ObservationWindow> window_;
  ArmCounts counts_;
  std::uint64_t rounds_ = 0;
};

class ConTsPolicy final : public Policy {
 public:
  ConTsPolicy(RateTable rates, double tau, std::optional<std::size_t> window = {});
  PolicyDecision select(Rng& rng) override;
  const BetaPosterior& posterior() const noexcept { return posterior_; }

 private:
  void on_update(std::size_t arm, bool outcome) override;
  BetaPosterior posterior_;
};

class ConKlUcbPolicy final : public Policy {
 public:
  ConKlUcbPolicy(RateTable rates, double tau, std::optional<std::size_t> window = {});
  PolicyDecision select(Rng& rng) override;
};

class UtsPolicy final : public Policy {
 public:
  UtsPolicy(RateTable rates, double tau, std::optional<std::size_t> window = {});
  PolicyDecision select(Rng& rng) override;
  const std::vector<std::uint64_t>& leader_count() const noexcept { return leader_count_; }

 private:
  std::vector<std::uint64_t> leader_count_;
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const RateTable& rates, double tau);

}  // namespace conbandit
