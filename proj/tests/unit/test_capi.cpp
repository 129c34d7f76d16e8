#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "conbandit/conbandit.h"

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("c api: lp solve") {
  double rates[8];
  size_t k = 0;
  CHECK(cb_default_rates(rates, 8, &k) == CB_OK);
  REQUIRE(k == 8);
  double mu[8];
  CHECK(cb_preset_success_probs("steep", mu, 8, &k) == CB_OK);

  double sel[8];
  double obj = 0;
  for (cb_lp_method m : {CB_LP_VERTEX, CB_LP_SIMPLEX}) {
    CHECK(cb_lp_solve(rates, mu, 8, 0.75, m, sel, &obj) == CB_OK);
    CHECK(obj == doctest::Approx(21.6));
    CHECK(sel[4] == doctest::Approx(1.0));
  }

  const double low[2] = {0.5, 0.3};
  CHECK(cb_lp_solve(rates, low, 2, 0.9, CB_LP_VERTEX, sel, &obj) == CB_ERR_INFEASIBLE);
  CHECK(std::strlen(cb_last_error()) > 0);

  const double unsorted[2] = {9, 6};
  CHECK(cb_lp_solve(unsorted, low, 2, 0.1, CB_LP_VERTEX, sel, &obj) == CB_ERR_CONFIG);
  CHECK(cb_lp_solve(nullptr, low, 2, 0.1, CB_LP_VERTEX, sel, &obj) == CB_ERR_CONFIG);
}

TEST_CASE("c api: presets") {
  CHECK(cb_preset_count() == 4);
  CHECK(std::string(cb_preset_name(0)) == "gradual");
  CHECK(cb_preset_name(4) == nullptr);
  size_t k = 0;
  CHECK(cb_preset_success_probs("Linear", nullptr, 0, &k) == CB_OK);
  CHECK(k == 8);
  CHECK(cb_preset_success_probs("fading", nullptr, 0, &k) == CB_ERR_CONFIG);
  CHECK(std::string(cb_version()).size() > 0);
}

TEST_CASE("c api: policy handle") {
  double rates[8];
  size_t k = 0;
  cb_default_rates(rates, 8, &k);
  cb_policy* policy = nullptr;
  REQUIRE(cb_policy_create("con-ts", rates, 8, 0.75, 0, 42, &policy) == CB_OK);
  double sel[8];
  for (int t = 0; t < 100; ++t) {
    size_t arm = 99;
    int fallback = -1;
    REQUIRE(cb_policy_select(policy, sel, &arm, &fallback) == CB_OK);
    CHECK(arm < 8);
    CHECK(sel[arm] > 0.0);
    CHECK((fallback == 0 || fallback == 1));
    CHECK(cb_policy_update(policy, arm, t % 2) == CB_OK);
  }
  CHECK(cb_policy_update(policy, 8, 1) == CB_ERR_CONFIG);
  CHECK(cb_policy_update(policy, 0, 2) == CB_ERR_CONFIG);
  cb_policy_destroy(policy);

  CHECK(cb_policy_create("epsilon-greedy", rates, 8, 0.75, 0, 1, &policy) == CB_ERR_CONFIG);
  CHECK(cb_policy_create("uts", rates, 8, 2.0, 0, 1, &policy) == CB_ERR_CONFIG);
  REQUIRE(cb_policy_create("uts", rates, 8, 0.75, 25, 1, &policy) == CB_OK);
  cb_policy_destroy(policy);
}

TEST_CASE("c api: experiment lifecycle") {
  const auto dir = std::filesystem::temp_directory_path() / "conbandit_capi_test";
  std::filesystem::remove_all(dir);

  cb_experiment* exp = nullptr;
  REQUIRE(cb_experiment_create(R"({"environment":"lossy","T":100,"runs":2})", &exp) == CB_OK);
  CHECK(std::string(cb_experiment_config(exp)).find("\"lossy\"") != std::string::npos);
  CHECK(cb_experiment_policy_count(exp) == 0);
  CHECK(cb_experiment_write(exp, dir.c_str()) == CB_ERR_INTERNAL);
  REQUIRE(cb_experiment_run(exp, 1) == CB_OK);
  REQUIRE(cb_experiment_policy_count(exp) == 3);
  CHECK(std::string(cb_experiment_policy_name(exp, 2)) == "con-kl-ucb");
  cb_final_metrics m{};
  CHECK(cb_experiment_final(exp, 0, &m) == CB_OK);
  CHECK(m.cum_expected_tput > 0.0);
  CHECK(cb_experiment_final(exp, 3, &m) == CB_ERR_CONFIG);
  REQUIRE(cb_experiment_write(exp, dir.c_str()) == CB_OK);
  cb_experiment_destroy(exp);

  for (const char* f : {"lossy_con-ts.csv", "lossy_uts.csv", "lossy_con-kl-ucb.csv",
                        "summary.json", "metadata.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }

  // Re-running from metadata reproduces the CSVs byte for byte.
  cb_experiment* rerun = nullptr;
  REQUIRE(cb_experiment_create(slurp(dir / "metadata.json").c_str(), &rerun) == CB_OK);
  REQUIRE(cb_experiment_run(rerun, 2) == CB_OK);
  const auto dir2 = dir / "again";
  REQUIRE(cb_experiment_write(rerun, dir2.c_str()) == CB_OK);
  cb_experiment_destroy(rerun);
  CHECK(slurp(dir / "lossy_uts.csv") == slurp(dir2 / "lossy_uts.csv"));
  CHECK(slurp(dir / "summary.json") == slurp(dir2 / "summary.json"));

  CHECK(cb_experiment_create(R"({"tau": 1.5})", &exp) == CB_ERR_CONFIG);
  CHECK(std::string(cb_last_error()).find("tau") != std::string::npos);
  CHECK(cb_experiment_create("{", &exp) == CB_ERR_CONFIG);
  std::filesystem::remove_all(dir);
}
