// conbandit command-line front end. Talks to the library only through the
// C API in conbandit/conbandit.h.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conbandit/conbandit.h"

namespace {

using nlohmann::json;

struct ConfigFailure {
  std::string message;
};

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigFailure{"not a number: '" + item + "'"};
    }
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigFailure{"cannot read '" + path + "'"};
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigFailure{"'" + path + "' is not valid JSON: " + e.what()};
  }
}

int report(cb_status status) {
  if (status != CB_OK) std::cerr << "error: " << cb_last_error() << "\n";
  return static_cast<int>(status);
}

unsigned worker_threads(unsigned requested) {
  unsigned threads = requested != 0 ? requested : std::thread::hardware_concurrency();
  if (const char* cap = std::getenv("CONBANDIT_THREADS")) {
    const long value = std::strtol(cap, nullptr, 10);
    if (value > 0) threads = std::min<unsigned>(threads == 0 ? value : threads, value);
  }
  return threads == 0 ? 1 : threads;
}

struct RunOptions {
  std::string config_path;
  std::string env;
  std::string anchors;
  std::size_t segment_len = 0;
  std::string policies;
  std::uint64_t horizon = 0;
  std::uint64_t runs = 0;
  double tau = -1.0;
  bool tau_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t window = 0;
  std::size_t ma_window = 0;
  std::string out;
  bool no_crn = false;
  unsigned threads = 0;
};

json resolve_run_config(const RunOptions& o, const CLI::App& cmd) {
  json doc = json::object();
  if (!o.config_path.empty()) {
    doc = read_json_file(o.config_path);
    if (doc.is_object() && doc.contains("config")) doc = doc["config"];
    if (!doc.is_object()) throw ConfigFailure{"config file must hold a JSON object"};
  }

  const bool env_object = !o.anchors.empty() || o.segment_len != 0 ||
                          (doc.contains("environment") && doc["environment"].is_object());
  if (env_object) {
    json env = doc.contains("environment") ? doc["environment"] : json::object();
    if (env.is_string()) env = json{{"name", env}};
    if (!o.env.empty()) env["name"] = o.env;
    if (!o.anchors.empty()) env["anchors"] = split_list(o.anchors);
    if (o.segment_len != 0) env["segment_len"] = o.segment_len;
    doc["environment"] = env;
  } else if (!o.env.empty()) {
    doc["environment"] = o.env;
  }

  if (!o.policies.empty()) doc["policies"] = split_list(o.policies);
  if (cmd.count("--T")) doc["T"] = o.horizon;
  if (cmd.count("--runs")) doc["runs"] = o.runs;
  if (cmd.count("--tau")) doc["tau"] = o.tau;
  if (cmd.count("--seed")) doc["base_seed"] = o.seed;
  if (cmd.count("--window")) doc["window"] = o.window;
  if (cmd.count("--ma-window")) doc["ma_window"] = o.ma_window;
  if (!o.out.empty()) doc["output_dir"] = o.out;
  if (o.no_crn) doc["common_random_numbers"] = false;
  return doc;
}

int cmd_run(const RunOptions& o, const CLI::App& cmd) {
  const json doc = resolve_run_config(o, cmd);
  cb_experiment* experiment = nullptr;
  if (cb_status s = cb_experiment_create(doc.dump().c_str(), &experiment); s != CB_OK) {
    return report(s);
  }
  std::unique_ptr<cb_experiment, decltype(&cb_experiment_destroy)> guard(experiment,
                                                                         &cb_experiment_destroy);
  const json resolved = json::parse(cb_experiment_config(experiment));
  std::cerr << "running " << resolved["runs"] << " runs x " << resolved["policies"].size()
            << " policies, T = " << resolved["T"] << "\n";

  if (cb_status s = cb_experiment_run(experiment, worker_threads(o.threads)); s != CB_OK) {
    return report(s);
  }
  if (cb_status s = cb_experiment_write(experiment, nullptr); s != CB_OK) return report(s);

  for (size_t i = 0; i < cb_experiment_policy_count(experiment); ++i) {
    cb_final_metrics m{};
    cb_experiment_final(experiment, i, &m);
    std::cout << cb_experiment_policy_name(experiment, i) << ": tput=" << fmt9(m.cum_expected_tput)
              << " violation=" << fmt9(m.cum_violation) << " ratio=" << fmt9(m.ratio)
              << (m.ratio_clamped ? " (clamped)" : "") << " regret=" << fmt9(m.cum_regret)
              << "\n";
  }
  std::cout << "outputs written to " << resolved["output_dir"].get<std::string>() << "\n";
  return 0;
}

int cmd_presets() {
  std::vector<double> rates(64);
  size_t k = 0;
  cb_default_rates(rates.data(), rates.size(), &k);
  rates.resize(k);
  std::cout << "rates_mbps:";
  for (double r : rates) std::cout << ' ' << fmt9(r);
  std::cout << "\n";
  for (size_t i = 0; i < cb_preset_count(); ++i) {
    std::vector<double> mu(64);
    size_t n = 0;
    cb_preset_success_probs(cb_preset_name(i), mu.data(), mu.size(), &n);
    std::cout << cb_preset_name(i) << ":";
    for (size_t j = 0; j < n; ++j) std::cout << ' ' << fmt9(mu[j]);
    std::cout << "\n";
  }
  std::cout << "nonstationary: gradual -> lossy -> steep -> gradual, 250 intervals per segment\n";
  return 0;
}

struct LpOptions {
  std::string file;
  std::string rates;
  std::string mu;
  std::string env;
  double tau = 0.75;
  std::string method = "vertex";
};

int cmd_lp_solve(const LpOptions& o, const CLI::App& cmd) {
  std::vector<double> rates;
  std::vector<double> mu;
  double tau = o.tau;

  if (!o.file.empty()) {
    const json doc = read_json_file(o.file);
    try {
      if (doc.contains("rates")) rates = doc.at("rates").get<std::vector<double>>();
      mu = doc.at("success_probs").get<std::vector<double>>();
      if (doc.contains("tau")) tau = doc.at("tau").get<double>();
    } catch (const json::exception& e) {
      throw ConfigFailure{"lp file: " + std::string(e.what())};
    }
  }
  if (!o.rates.empty()) rates = parse_numbers(o.rates);
  if (!o.mu.empty()) mu = parse_numbers(o.mu);
  if (cmd.count("--tau")) tau = o.tau;
  if (!o.env.empty()) {
    mu.assign(64, 0.0);
    size_t n = 0;
    if (cb_status s = cb_preset_success_probs(o.env.c_str(), mu.data(), mu.size(), &n);
        s != CB_OK) {
      return report(s);
    }
    mu.resize(n);
  }
  if (rates.empty()) {
    rates.assign(64, 0.0);
    size_t n = 0;
    cb_default_rates(rates.data(), rates.size(), &n);
    rates.resize(n);
  }
  if (mu.empty()) throw ConfigFailure{"lp-solve needs success probabilities (--mu, --env or --file)"};
  if (mu.size() != rates.size()) throw ConfigFailure{"--mu and --rates differ in length"};

  std::vector<double> selection(rates.size());
  double objective = 0.0;
  const cb_lp_method method = o.method == "simplex" ? CB_LP_SIMPLEX : CB_LP_VERTEX;
  const cb_status s =
      cb_lp_solve(rates.data(), mu.data(), rates.size(), tau, method, selection.data(), &objective);
  if (s == CB_ERR_INFEASIBLE) {
    std::cout << "feasible: no\n";
    std::cerr << "error: " << cb_last_error() << "\n";
    return static_cast<int>(s);
  }
  if (s != CB_OK) return report(s);

  std::cout << "feasible: yes\n";
  std::cout << "objective_mbps: " << fmt9(objective) << "\n";
  std::cout << "selection:";
  for (double p : selection) std::cout << ' ' << fmt9(p);
  std::cout << "\nsupport:";
  for (size_t k = 0; k < selection.size(); ++k) {
    if (selection[k] > 0.0) std::cout << ' ' << fmt9(rates[k]) << "Mbps@" << fmt9(selection[k]);
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conbandit: latency-constrained rate selection experiments"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write CSV/summary/metadata");
  run_cmd->add_option("--config", run.config_path, "JSON config file (or a previous metadata.json)");
  run_cmd->add_option("--env", run.env, "gradual|lossy|steep|linear|nonstationary");
  run_cmd->add_option("--anchors", run.anchors, "Comma-separated anchor presets (nonstationary)");
  run_cmd->add_option("--segment-len", run.segment_len, "Intervals per interpolation segment");
  run_cmd->add_option("--policies", run.policies, "Comma-separated: con-ts,uts,con-kl-ucb[@W]");
  run_cmd->add_option("--T", run.horizon, "Horizon (intervals per run)");
  run_cmd->add_option("--runs", run.runs, "Independent runs per policy");
  run_cmd->add_option("--tau", run.tau, "Target packet success probability");
  run_cmd->add_option("--seed", run.seed, "Base seed");
  run_cmd->add_option("--window", run.window, "Sliding window for every policy");
  run_cmd->add_option("--ma-window", run.ma_window, "Moving-average window for MA columns");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_flag("--no-crn", run.no_crn, "Independent channel noise per policy");
  run_cmd->add_option("--threads", run.threads, "Worker threads (capped by CONBANDIT_THREADS)");

  app.add_subcommand("presets", "Print the built-in environments");

  LpOptions lp;
  auto* lp_cmd = app.add_subcommand("lp-solve", "Solve the rate-selection LP once");
  lp_cmd->add_option("--file", lp.file, "JSON with rates, success_probs, tau");
  lp_cmd->add_option("--rates", lp.rates, "Comma-separated rates in Mbps (default WiFi set)");
  lp_cmd->add_option("--mu", lp.mu, "Comma-separated success probabilities");
  lp_cmd->add_option("--env", lp.env, "Take success probabilities from a preset");
  lp_cmd->add_option("--tau", lp.tau, "Target packet success probability");
  lp_cmd->add_option("--method", lp.method, "vertex|simplex")
      ->check(CLI::IsMember({"vertex", "simplex"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, *run_cmd);
    if (lp_cmd->parsed()) return cmd_lp_solve(lp, *lp_cmd);
    return cmd_presets();
  } catch (const ConfigFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
