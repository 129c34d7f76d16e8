#include <doctest.h>

#include <cmath>
#include <random>

#include "conbandit/env.hpp"
#include "conbandit/errors.hpp"
#include "conbandit/policies.hpp"

using namespace conbandit;

namespace {

// Fine-grid scan: largest q on the grid with n d(p, q) <= log t. Independent
// of the bisection in kl_ucb_index.
double kl_ucb_scan(double p, double n, double t, int steps = 2'000'000) {
  double best = p;
  for (int i = 0; i <= steps; ++i) {
    const double q = p + (1.0 - p) * i / steps;
    if (q <= 0.0 || q >= 1.0) continue;
    const double d = (p > 0 ? p * std::log(p / q) : 0.0) +
                     (p < 1 ? (1 - p) * std::log((1 - p) / (1 - q)) : 0.0);
    if (n * d <= std::log(t)) best = q;
  }
  return best;
}

}  // namespace

TEST_CASE("beta posterior update") {
  BetaPosterior p = BetaPosterior::uniform_prior(3);
  con_ts_update(p, 1, true);
  CHECK(p.alpha[1] == 2.0);
  CHECK(p.beta[1] == 1.0);
  con_ts_update(p, 2, false);
  CHECK(p.alpha[2] == 1.0);
  CHECK(p.beta[2] == 2.0);
  CHECK(p.alpha[0] == 1.0);
  CHECK(p.beta[0] == 1.0);
  CHECK_THROWS_AS(con_ts_update(p, 3, true), ContractViolation);
}

TEST_CASE("posterior after s successes and f failures is (1+s, 1+f)") {
  std::mt19937_64 gen(3);
  BetaPosterior p = BetaPosterior::uniform_prior(5);
  ArmCounts counts(5);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t arm = gen() % 5;
    const bool x = gen() % 3 == 0;
    con_ts_update(p, arm, x);
    counts.record(arm, x);
  }
  CHECK(p == BetaPosterior::from_counts(counts));
}

TEST_CASE("bernoulli KL divergence") {
  CHECK(kl_bernoulli(0.5, 0.5) == doctest::Approx(0.0));
  CHECK(kl_bernoulli(0.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(kl_bernoulli(0.75, 0.25) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));
  CHECK(kl_bernoulli(1.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(kl_bernoulli(0.5, 0.0), ContractViolation);
  CHECK_THROWS_AS(kl_bernoulli(0.5, 1.0), ContractViolation);
}

TEST_CASE("KL-UCB index") {
  CHECK(kl_ucb_index(0.3, 0, 10) == 1.0);
  CHECK(kl_ucb_index(1.0, 50, 1000) == 1.0);
  // Root of 100 d(0.5, q) = log 1000, found independently: 0.679608.
  const double q = kl_ucb_index(0.5, 100, 1000);
  CHECK(std::abs(q - 0.6796081916588991) < 1e-8);
  CHECK(std::abs(q - kl_ucb_scan(0.5, 100, 1000)) < 1e-6);
  CHECK(std::abs(kl_ucb_index(0.1, 7, 300) - kl_ucb_scan(0.1, 7, 300)) < 1e-6);
  // t = 1 gives zero exploration budget.
  CHECK(kl_ucb_index(0.4, 10, 1) == doctest::Approx(0.4).epsilon(1e-8));
}

TEST_CASE("KL-UCB index monotonicity") {
  for (double mu : {0.0, 0.1, 0.35, 0.5, 0.8, 0.97}) {
    double prev_n = 2.0;
    for (std::uint64_t n = 1; n < 2000; n = n * 3 / 2 + 1) {
      const double v = kl_ucb_index(mu, n, 5000);
      CHECK(v >= mu);
      CHECK(v <= prev_n);
      prev_n = v;
    }
    double prev_t = -1.0;
    for (std::uint64_t t = 1; t < 100000; t = t * 2 + 1) {
      const double v = kl_ucb_index(mu, 40, t);
      CHECK(v >= prev_t);
      prev_t = v;
    }
  }
}

TEST_CASE("con-ts selection with concentrated posteriors") {
  const RateTable rates({6, 54});
  // Point-mass-like posteriors at 0.9 and 0.3.
  BetaPosterior p{{0.9e10, 0.3e10}, {0.1e10, 0.7e10}};
  Rng rng(1);
  const auto d = con_ts_select(p, rates, 0.75, rng);
  REQUIRE(d.lp_inputs.size() == 2);
  CHECK_FALSE(d.fallback_used);
  CHECK(std::abs(d.selection[0] - 0.75) < 1e-3);
  CHECK(std::abs(d.selection[1] - 0.25) < 1e-3);

  // Exact LP on the stated sample gives the binding mix: 0.75*5.4 + 0.25*16.2 = 8.1.
  const std::vector<double> sampled{0.9, 0.3};
  const auto exact = solve_rate_lp({rates, sampled, 0.75});
  CHECK(std::abs(exact->selection[0] - 0.75) < 1e-12);
  CHECK(exact->objective == doctest::Approx(8.1));
}

TEST_CASE("con-ts falls back to uniform when no sample reaches tau") {
  const auto rates = wifi_rates();
  BetaPosterior p{std::vector<double>(8, 1.0), std::vector<double>(8, 1e9)};
  Rng rng(5);
  const auto d = con_ts_select(p, rates, 0.75, rng);
  CHECK(d.fallback_used);
  CHECK(d.selection == SelectionVector::uniform(8));
  CHECK(d.chosen_arm < 8);
}

TEST_CASE("con-ts with tau = 0 plays the sampled throughput argmax") {
  const auto rates = wifi_rates();
  BetaPosterior p = BetaPosterior::uniform_prior(8);
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto d = con_ts_select(p, rates, 0.0, rng);
    std::size_t best = 0;
    for (std::size_t k = 1; k < 8; ++k) {
      if (rates[k] * d.lp_inputs[k] > rates[best] * d.lp_inputs[best]) best = k;
    }
    CHECK(d.selection == SelectionVector::one_hot(8, best));
    CHECK(d.chosen_arm == best);
  }
}

TEST_CASE("con-ts consumes K beta draws and one uniform") {
  const auto rates = wifi_rates();
  BetaPosterior p = BetaPosterior::uniform_prior(8);
  p.alpha[3] = 14;
  Rng a(99);
  Rng b(99);
  (void)con_ts_select(p, rates, 0.75, a);
  for (std::size_t k = 0; k < 8; ++k) (void)b.beta(p.alpha[k], p.beta[k]);
  (void)b.uniform();
  CHECK(a.uniform() == b.uniform());
}

TEST_CASE("con-ts selection is invariant to rescaling the rates") {
  const auto rates = wifi_rates();
  const auto scaled = rates.scaled(7.5);
  std::mt19937_64 gen(1);
  for (int i = 0; i < 100; ++i) {
    BetaPosterior p = BetaPosterior::uniform_prior(8);
    for (std::size_t k = 0; k < 8; ++k) {
      p.alpha[k] += static_cast<double>(gen() % 40);
      p.beta[k] += static_cast<double>(gen() % 40);
    }
    Rng a(i);
    Rng b(i);
    const auto da = con_ts_select(p, rates, 0.75, a);
    const auto db = con_ts_select(p, scaled, 0.75, b);
    CHECK(da.selection == db.selection);
    CHECK(da.chosen_arm == db.chosen_arm);
  }
}

TEST_CASE("con-kl-ucb first round plays the top rate") {
  const auto rates = wifi_rates();
  Rng rng(2);
  const auto d = con_kl_ucb_select(ArmCounts(8), rates, 0.75, 1, rng);
  CHECK(d.selection == SelectionVector::one_hot(8, 7));
  CHECK(d.chosen_arm == 7);
  CHECK_FALSE(d.fallback_used);
}

TEST_CASE("con-kl-ucb selection is the LP solution on its indices") {
  const auto rates = wifi_rates();
  std::mt19937_64 gen(4);
  for (int i = 0; i < 200; ++i) {
    ArmCounts c(8);
    for (std::size_t k = 0; k < 8; ++k) {
      c.successes[k] = gen() % 50;
      c.failures[k] = gen() % 50;
    }
    Rng rng(i);
    const auto d = con_kl_ucb_select(c, rates, 0.75, 1 + gen() % 10000, rng);
    for (std::size_t k = 0; k < 8; ++k) {
      const double mean = c.mean(k).value_or(1.0);
      CHECK(d.lp_inputs[k] >= mean);
    }
    const auto lp = solve_rate_lp({rates, d.lp_inputs, 0.75});
    if (lp) {
      CHECK(d.selection == lp->selection);
    } else {
      CHECK(d.fallback_used);
    }
  }
}

TEST_CASE("uts") {
  SUBCASE("single arm") {
    const RateTable rates({6});
    UtsPolicy policy(rates, 0.75);
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
      const auto d = policy.select(rng);
      CHECK(d.chosen_arm == 0);
      policy.update(0, i % 2 == 0);
    }
  }
  SUBCASE("first round forces the top-rate leader") {
    const auto rates = wifi_rates();
    std::vector<std::uint64_t> leader_count(8, 0);
    Rng rng(1);
    const auto d = uts_select(ArmCounts(8), rates, leader_count, rng);
    CHECK(d.chosen_arm == 7);
    CHECK(d.selection == SelectionVector::one_hot(8, 7));
    CHECK(leader_count[7] == 1);
  }
  SUBCASE("played arm stays within one step of the leader") {
    const auto rates = wifi_rates();
    const auto& mu = preset_success_probs(Preset::Gradual);
    std::vector<std::uint64_t> leader_count(8, 0);
    ArmCounts counts(8);
    Rng rng(3);
    Rng channel(4);
    for (int t = 0; t < 3000; ++t) {
      std::size_t leader = 0;
      double best = -1.0;
      for (std::size_t k = 0; k < 8; ++k) {
        const double v = rates[k] * counts.mean(k).value_or(1.0);
        if (v > best) {
          best = v;
          leader = k;
        }
      }
      const std::uint64_t before = leader_count[leader];
      const auto d = uts_select(counts, rates, leader_count, rng);
      CHECK(leader_count[leader] == before + 1);
      const auto gap = d.chosen_arm > leader ? d.chosen_arm - leader : leader - d.chosen_arm;
      CHECK(gap <= 1);
      if (before % kUtsLeaderPeriod == 0) CHECK(d.chosen_arm == leader);
      CHECK(d.selection == SelectionVector::one_hot(8, d.chosen_arm));
      counts.record(d.chosen_arm, channel.uniform() < mu[d.chosen_arm]);
    }
  }
}

TEST_CASE("sliding window") {
  SUBCASE("capacity one forgets everything but the last observation") {
    ObservationWindow w(1);
    (void)windowed_update(w, 2, 0, true);
    const auto p = windowed_update(w, 2, 0, false);
    CHECK(p.alpha[0] == 1.0);
    CHECK(p.beta[0] == 2.0);
  }
  SUBCASE("under capacity matches the full history") {
    ObservationWindow w(100);
    BetaPosterior full = BetaPosterior::uniform_prior(4);
    BetaPosterior windowed;
    std::mt19937_64 gen(6);
    for (int i = 0; i < 50; ++i) {
      const std::size_t arm = gen() % 4;
      const bool x = gen() % 2;
      con_ts_update(full, arm, x);
      windowed = windowed_update(w, 4, arm, x);
    }
    CHECK(windowed == full);
  }
  SUBCASE("over capacity equals a recount of the newest entries") {
    ObservationWindow w(100);
    std::vector<Observation> all;
    std::mt19937_64 gen(8);
    BetaPosterior p;
    for (int i = 0; i < 1000; ++i) {
      const Observation o{gen() % 6, gen() % 2 == 1};
      all.push_back(o);
      p = windowed_update(w, 6, o.arm, o.outcome);
      CHECK(w.size() <= 100);
    }
    BetaPosterior expected = BetaPosterior::uniform_prior(6);
    for (std::size_t i = all.size() - 100; i < all.size(); ++i) {
      (all[i].outcome ? expected.alpha : expected.beta)[all[i].arm] += 1.0;
    }
    CHECK(p == expected);
    CHECK(w.entries().front().arm == all[900].arm);
  }
  CHECK_THROWS_AS(ObservationWindow(0), ContractViolation);
}

TEST_CASE("policy names") {
  CHECK(PolicySpec::parse("con-ts").kind == PolicyKind::ConTs);
  CHECK(PolicySpec::parse("UTS").kind == PolicyKind::Uts);
  CHECK(PolicySpec::parse("con-kl-ucb").kind == PolicyKind::ConKlUcb);
  CHECK_FALSE(PolicySpec::parse("con-ts").window.has_value());
  CHECK(PolicySpec::parse("con-ts@100").window == std::optional<std::size_t>(100));
  CHECK(PolicySpec::parse("uts", 50).name() == "uts@50");
  CHECK(PolicySpec::parse("uts@20", 50).name() == "uts@20");
  CHECK_THROWS_AS(PolicySpec::parse("greedy"), ConfigError);
  CHECK_THROWS_AS(PolicySpec::parse("con-ts@"), ConfigError);
  CHECK_THROWS_AS(PolicySpec::parse("con-ts@0"), ConfigError);
  CHECK_THROWS_AS(PolicySpec::parse("con-ts@1x"), ConfigError);
}

TEST_CASE("stateful policies track their counts") {
  const auto rates = wifi_rates();
  for (const char* name : {"con-ts", "uts", "con-kl-ucb", "con-ts@10", "uts@10", "con-kl-ucb@10"}) {
    const auto spec = PolicySpec::parse(name);
    auto policy = make_policy(spec, rates, 0.75);
    Rng rng(17);
    Rng channel(18);
    std::vector<Observation> history;
    for (int t = 0; t < 200; ++t) {
      const auto d = policy->select(rng);
      CHECK(d.chosen_arm < 8);
      CHECK(d.selection[d.chosen_arm] > 0.0);
      const bool x = channel.uniform() < 0.5;
      policy->update(d.chosen_arm, x);
      history.push_back({d.chosen_arm, x});
    }
    CHECK(policy->rounds() == 200);
    ArmCounts expected(8);
    const std::size_t from = spec.window ? history.size() - *spec.window : 0;
    for (std::size_t i = from; i < history.size(); ++i) {
      expected.record(history[i].arm, history[i].outcome);
    }
    CHECK(policy->counts() == expected);
  }
}
