#include "conbandit/policies.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "conbandit/errors.hpp"

namespace conbandit {

std::optional<double> ArmCounts::mean(std::size_t k) const {
  const std::uint64_t n = pulls(k);
  if (n == 0) return std::nullopt;
  return static_cast<double>(successes[k]) / static_cast<double>(n);
}

void ArmCounts::record(std::size_t arm, bool outcome) {
  if (arm >= size()) throw ContractViolation("arm index out of range");
  (outcome ? successes : failures)[arm] += 1;
}

BetaPosterior BetaPosterior::uniform_prior(std::size_t num_arms) {
  return BetaPosterior{std::vector<double>(num_arms, 1.0), std::vector<double>(num_arms, 1.0)};
}

BetaPosterior BetaPosterior::from_counts(const ArmCounts& counts) {
  BetaPosterior p = uniform_prior(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    p.alpha[k] += static_cast<double>(counts.successes[k]);
    p.beta[k] += static_cast<double>(counts.failures[k]);
  }
  return p;
}

ObservationWindow::ObservationWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ContractViolation("observation window capacity must be >= 1");
}

void ObservationWindow::push(std::size_t arm, bool outcome) {
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back({arm, outcome});
}

ArmCounts ObservationWindow::recount(std::size_t num_arms) const {
  ArmCounts counts(num_arms);
  for (const auto& obs : entries_) counts.record(obs.arm, obs.outcome);
  return counts;
}

namespace {

// Steps 3-4 shared by the two LP-driven policies.
PolicyDecision decide_from_lp(std::vector<double> lp_inputs, const RateTable& rates, double tau,
                              Rng& rng) {
  PolicyDecision decision;
  auto solution = solve_rate_lp(LpInstance{rates, lp_inputs, tau});
  if (solution) {
    decision.selection = std::move(solution->selection);
  } else {
    decision.selection = SelectionVector::uniform(rates.size());
    decision.fallback_used = true;
  }
  decision.chosen_arm = rng.categorical(decision.selection.values());
  decision.lp_inputs = std::move(lp_inputs);
  return decision;
}

std::size_t argmax_throughput(const RateTable& rates, std::span<const double> mu,
                              std::size_t begin, std::size_t end) {
  std::size_t best = begin;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = begin; k < end; ++k) {
    const double value = rates[k] * mu[k];
    if (value > best_value) {
      best_value = value;
      best = k;
    }
  }
  return best;
}

}  // namespace

PolicyDecision con_ts_select(const BetaPosterior& posterior, const RateTable& rates, double tau,
                             Rng& rng) {
  if (posterior.size() != rates.size()) throw ContractViolation("posterior/rates size mismatch");
  std::vector<double> sampled(rates.size());
  for (std::size_t k = 0; k < sampled.size(); ++k) {
    sampled[k] = rng.beta(posterior.alpha[k], posterior.beta[k]);
  }
  return decide_from_lp(std::move(sampled), rates, tau, rng);
}

void con_ts_update(BetaPosterior& posterior, std::size_t arm, bool outcome) {
  if (arm >= posterior.size()) throw ContractViolation("arm index out of range");
  if (outcome) {
    posterior.alpha[arm] += 1.0;
  } else {
    posterior.beta[arm] += 1.0;
  }
}

double kl_bernoulli(double p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw ContractViolation("kl_bernoulli: q must lie in (0,1)");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("kl_bernoulli: p must lie in [0,1]");
  double d = 0.0;
  if (p > 0.0) d += p * std::log(p / q);
  if (p < 1.0) d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return std::max(d, 0.0);
}

double kl_ucb_index(double mu_hat, std::uint64_t n, std::uint64_t t) {
  constexpr double kLow = 1e-12;
  constexpr double kHigh = 1.0 - 1e-12;
  if (n == 0) return 1.0;
  mu_hat = std::clamp(mu_hat, 0.0, 1.0);
  if (mu_hat >= 1.0) return 1.0;

  const double budget = std::log(static_cast<double>(std::max<std::uint64_t>(t, 1))) /
                        static_cast<double>(n);
  double lo = mu_hat;
  double hi = 1.0;
  for (int iter = 0; iter < 64 && hi - lo > 1e-9; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (kl_bernoulli(mu_hat, std::clamp(mid, kLow, kHigh)) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

PolicyDecision con_kl_ucb_select(const ArmCounts& counts, const RateTable& rates, double tau,
                                 std::uint64_t t, Rng& rng) {
  if (counts.size() != rates.size()) throw ContractViolation("counts/rates size mismatch");
  std::vector<double> indices(rates.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    indices[k] = kl_ucb_index(counts.mean(k).value_or(1.0), counts.pulls(k), t);
  }
  return decide_from_lp(std::move(indices), rates, tau, rng);
}

PolicyDecision uts_select(const ArmCounts& counts, const RateTable& rates,
                          std::vector<std::uint64_t>& leader_count, Rng& rng) {
  const std::size_t num_arms = rates.size();
  if (counts.size() != num_arms || leader_count.size() != num_arms) {
    throw ContractViolation("uts_select: size mismatch");
  }

  std::vector<double> estimate(num_arms);
  for (std::size_t k = 0; k < num_arms; ++k) estimate[k] = counts.mean(k).value_or(1.0);
  const std::size_t leader = argmax_throughput(rates, estimate, 0, num_arms);

  std::size_t played = leader;
  if ((leader_count[leader]++) % kUtsLeaderPeriod != 0) {
    const std::size_t lo = leader == 0 ? 0 : leader - 1;
    const std::size_t hi = std::min(num_arms, leader + 2);
    std::vector<double> sampled(num_arms, 0.0);
    for (std::size_t k = lo; k < hi; ++k) {
      sampled[k] = rng.beta(1.0 + static_cast<double>(counts.successes[k]),
                            1.0 + static_cast<double>(counts.failures[k]));
    }
    played = argmax_throughput(rates, sampled, lo, hi);
  }

  PolicyDecision decision;
  decision.selection = SelectionVector::one_hot(num_arms, played);
  decision.chosen_arm = rng.categorical(decision.selection.values());
  return decision;
}

BetaPosterior windowed_update(ObservationWindow& window, std::size_t num_arms, std::size_t arm,
                              bool outcome) {
  if (arm >= num_arms) throw ContractViolation("arm index out of range");
  window.push(arm, outcome);
  return BetaPosterior::from_counts(window.recount(num_arms));
}

// PolicySpec -----------------------------------------------------------------

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::ConTs:
      return "con-ts";
    case PolicyKind::Uts:
      return "uts";
    case PolicyKind::ConKlUcb:
      return "con-kl-ucb";
  }
  return "unknown";
}

PolicySpec PolicySpec::parse(std::string_view name, std::optional<std::size_t> default_window) {
  PolicySpec spec;
  spec.window = default_window;

  std::string_view base = name;
  if (const auto at = name.find('@'); at != std::string_view::npos) {
    base = name.substr(0, at);
    const std::string_view digits = name.substr(at + 1);
    std::size_t w = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), w);
    if (digits.empty() || ec != std::errc{} || end != digits.data() + digits.size() || w == 0) {
      throw ConfigError("bad window suffix in policy name '" + std::string(name) + "'");
    }
    spec.window = w;
  }

  std::string lowered(base);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered == "con-ts") {
    spec.kind = PolicyKind::ConTs;
  } else if (lowered == "uts") {
    spec.kind = PolicyKind::Uts;
  } else if (lowered == "con-kl-ucb") {
    spec.kind = PolicyKind::ConKlUcb;
  } else {
    throw ConfigError("unknown policy '" + std::string(name) +
                      "' (expected con-ts, uts or con-kl-ucb)");
  }
  return spec;
}

std::string PolicySpec::name() const {
  std::string out(to_string(kind));
  if (window) out += "@" + std::to_string(*window);
  return out;
}

// Policy ---------------------------------------------------------------------

Policy::Policy(RateTable rates, double tau, std::optional<std::size_t> window)
    : rates_(std::move(rates)), tau_(tau), counts_(rates_.size()) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ContractViolation("tau must lie in [0,1]");
  if (window) window_.emplace(*window);
}

std::optional<std::size_t> Policy::window_capacity() const {
  if (!window_) return std::nullopt;
  return window_->capacity();
}

void Policy::update(std::size_t arm, bool outcome) {
  if (arm >= num_arms()) throw ContractViolation("arm index out of range");
  if (window_) {
    window_->push(arm, outcome);
    counts_ = window_->recount(num_arms());
  } else {
    counts_.record(arm, outcome);
  }
  on_update(arm, outcome);
}

ConTsPolicy::ConTsPolicy(RateTable rates, double tau, std::optional<std::size_t> window)
    : Policy(std::move(rates), tau, window), posterior_(BetaPosterior::uniform_prior(num_arms())) {}

PolicyDecision ConTsPolicy::select(Rng& rng) {
  next_round();
  return con_ts_select(posterior_, rates(), tau(), rng);
}

void ConTsPolicy::on_update(std::size_t arm, bool outcome) {
  if (window_capacity()) {
    posterior_ = BetaPosterior::from_counts(counts());
  } else {
    con_ts_update(posterior_, arm, outcome);
  }
}

ConKlUcbPolicy::ConKlUcbPolicy(RateTable rates, double tau, std::optional<std::size_t> window)
    : Policy(std::move(rates), tau, window) {}

PolicyDecision ConKlUcbPolicy::select(Rng& rng) {
  std::uint64_t t = next_round();
  // Windowed statistics never cover more than W rounds.
  if (const auto w = window_capacity()) t = std::min<std::uint64_t>(t, *w);
  return con_kl_ucb_select(counts(), rates(), tau(), t, rng);
}

UtsPolicy::UtsPolicy(RateTable rates, double tau, std::optional<std::size_t> window)
    : Policy(std::move(rates), tau, window), leader_count_(num_arms(), 0) {}

PolicyDecision UtsPolicy::select(Rng& rng) {
  next_round();
  return uts_select(counts(), rates(), leader_count_, rng);
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const RateTable& rates, double tau) {
  switch (spec.kind) {
    case PolicyKind::ConTs:
      return std::make_unique<ConTsPolicy>(rates, tau, spec.window);
    case PolicyKind::Uts:
      return std::make_unique<UtsPolicy>(rates, tau, spec.window);
    case PolicyKind::ConKlUcb:
      return std::make_unique<ConKlUcbPolicy>(rates, tau, spec.window);
  }
  throw ContractViolation("unhandled policy kind");
}

}  // namespace conbandit
