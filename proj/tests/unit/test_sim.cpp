#include <doctest.h>

#include "conbandit/errors.hpp"
#include "conbandit/sim.hpp"

using namespace conbandit;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.environment.name = "gradual";
  c.horizon = 400;
  c.runs = 6;
  c.base_seed = 21;
  return c;
}

bool same_log(const MetricsLog& a, const MetricsLog& b) {
  if (a.horizon() != b.horizon()) return false;
  for (std::size_t i = 0; i < a.horizon(); ++i) {
    const auto& x = a.records[i];
    const auto& y = b.records[i];
    if (x.t != y.t || x.selection != y.selection || x.chosen_arm != y.chosen_arm ||
        x.outcome != y.outcome || x.expected_tput != y.expected_tput ||
        x.expected_success != y.expected_success || x.optimal_tput != y.optimal_tput) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("run_single is deterministic") {
  const auto c = small_config();
  for (const char* p : {"con-ts", "uts", "con-kl-ucb"}) {
    CHECK(same_log(run_single(c, p, 3), run_single(c, p, 3)));
    CHECK_FALSE(same_log(run_single(c, p, 3), run_single(c, p, 4)));
  }
}

TEST_CASE("single-arm environment always plays arm 0") {
  auto c = small_config();
  const EnvironmentSchedule env("one", RateTable({6}), {{0.9}}, 1);
  for (const char* p : {"con-ts", "uts", "con-kl-ucb"}) {
    const auto log = run_single(c, env, p, 0);
    for (const auto& r : log.records) CHECK(r.chosen_arm == 0);
    CHECK(regret(log, log.horizon()) == 0.0);
  }
}

TEST_CASE("records index t contiguously and stay within physical bounds") {
  auto c = small_config();
  c.horizon = 2000;
  const auto log = run_single(c, "con-ts", 0);
  REQUIRE(log.horizon() == 2000);
  for (std::size_t i = 0; i < log.horizon(); ++i) {
    const auto& r = log.records[i];
    CHECK(r.t == i + 1);
    // Unconstrained best single arm on gradual is 18 Mbps at 0.65: 11.7.
    CHECK(r.expected_tput <= 11.7 + 1e-9);
    CHECK(r.expected_tput >= 0.0);
    CHECK(r.expected_success >= 0.0);
    CHECK(r.expected_success <= 1.0);
    CHECK(std::abs(r.optimal_tput - 10.3) < 1e-9);
    CHECK(r.realized_tput == (r.outcome ? log.rates[r.chosen_arm] : 0.0));
  }
}

TEST_CASE("channel noise is shared across policies") {
  const auto c = small_config();
  const auto a = run_seeds(c, "con-ts", 2);
  const auto b = run_seeds(c, "uts", 2);
  CHECK(a.environment == b.environment);
  CHECK(a.policy != b.policy);
  CHECK(run_seeds(c, "con-ts", 3).environment != a.environment);

  // With a shared uniform per interval, two policies playing the same arm at
  // the same t must see the same outcome.
  const auto la = run_single(c, "con-ts", 2);
  const auto lb = run_single(c, "con-kl-ucb", 2);
  int shared = 0;
  for (std::size_t i = 0; i < la.horizon(); ++i) {
    if (la.records[i].chosen_arm == lb.records[i].chosen_arm) {
      ++shared;
      CHECK(la.records[i].outcome == lb.records[i].outcome);
    }
  }
  CHECK(shared > 0);

  auto independent = c;
  independent.common_random_numbers = false;
  CHECK(run_seeds(independent, "con-ts", 2).environment !=
        run_seeds(independent, "uts", 2).environment);
}

TEST_CASE("one run aggregates to that run's series") {
  auto c = small_config();
  c.runs = 1;
  c.policies = {"con-ts"};
  const auto results = run_experiment(c, 1);
  const auto log = run_single(c, "con-ts", 0);
  const auto series = cumulative_series(log);
  const auto& s = results.find("con-ts");
  CHECK(s.cum_tput_mean == series.throughput);
  CHECK(s.cum_violation_mean == series.violation);
  CHECK(s.cum_regret_mean == series.regret);
  for (double se : s.cum_tput_se) CHECK(se == 0.0);
}

TEST_CASE("aggregation does not depend on the worker count") {
  auto c = small_config();
  c.ma_window = 50;
  const auto serial = run_experiment(c, 1);
  const auto parallel = run_experiment(c, 4);
  REQUIRE(serial.policies.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& a = serial.policies[i];
    const auto& b = parallel.policies[i];
    CHECK(a.policy == b.policy);
    CHECK(a.cum_tput_mean == b.cum_tput_mean);
    CHECK(a.cum_violation_se == b.cum_violation_se);
    CHECK(a.ratio_mean == b.ratio_mean);
    CHECK(a.cum_regret_mean == b.cum_regret_mean);
    CHECK(a.ma_tput_mean == b.ma_tput_mean);
    CHECK(a.ma_violation_mean == b.ma_violation_mean);
  }
}

TEST_CASE("aggregated series shapes") {
  auto c = small_config();
  const auto a = run_experiment(c, 2);
  c.base_seed = 22;
  const auto b = run_experiment(c, 2);
  for (std::size_t i = 0; i < a.policies.size(); ++i) {
    CHECK(a.policies[i].cum_tput_mean.size() == c.horizon);
    CHECK(b.policies[i].cum_tput_mean.size() == c.horizon);
    CHECK(a.policies[i].ma_tput_mean.empty());
    CHECK(a.policies[i].cum_tput_mean != b.policies[i].cum_tput_mean);
  }
  const auto& s = a.find("uts");
  for (std::size_t t = 0; t < c.horizon; ++t) {
    CHECK(s.ratio_clamped[t] == (s.cum_violation_mean[t] < kRatioEpsilon ? 1 : 0));
    CHECK(s.ratio_mean[t] ==
          s.cum_tput_mean[t] / std::max(s.cum_violation_mean[t], kRatioEpsilon));
  }
}

TEST_CASE("moving-average columns smooth the cumulative means") {
  auto c = small_config();
  c.ma_window = 40;
  const auto r = run_experiment(c, 1);
  for (const auto& s : r.policies) {
    CHECK(s.ma_tput_mean == moving_average(s.cum_tput_mean, 40));
    CHECK(s.ma_violation_mean == moving_average(s.cum_violation_mean, 40));
  }
}

TEST_CASE("windowed policies via config") {
  auto c = small_config();
  c.environment.name = "nonstationary";
  c.environment.segment_len = 50;
  c.window = 30;
  c.policies = {"con-ts", "uts@10"};
  const auto r = run_experiment(c, 1);
  CHECK(r.policies[0].policy == "con-ts@30");
  CHECK(r.policies[1].policy == "uts@10");
  CHECK(r.environment == "nonstationary");
}

TEST_CASE("config validation") {
  auto c = small_config();
  c.tau = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.runs = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.horizon = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.policies = {"con-ts", "con-ts"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.policies = {};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.environment.name = "nowhere";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.environment.anchors = {"steep", "lossy"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.environment.name = "NonStationary";
  CHECK_NOTHROW(c.validate());
  c.environment.anchors = {"steep", "gritty"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
