#include "conbandit/config.hpp"

#include <set>

#include <json.hpp>

#include "conbandit/errors.hpp"

namespace conbandit {

using nlohmann::json;

namespace {

template <typename T>
T get_field(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::uint64_t get_count(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(std::string("config field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

void check_keys(const json& doc, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, _] : doc.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

EnvironmentConfig parse_environment(const json& v) {
  EnvironmentConfig env;
  if (v.is_string()) {
    env.name = v.get<std::string>();
    return env;
  }
  if (!v.is_object()) throw ConfigError("'environment' must be a string or an object");
  check_keys(v, {"name", "anchors", "segment_len"}, "environment");
  env.name = get_field<std::string>(v, "name");
  if (v.contains("anchors")) env.anchors = get_field<std::vector<std::string>>(v, "anchors");
  if (v.contains("segment_len")) env.segment_len = get_count(v, "segment_len");
  return env;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (doc.contains("config") && doc["config"].is_object()) doc = doc["config"];

  check_keys(doc,
             {"environment", "policies", "T", "runs", "base_seed", "tau", "window", "ma_window",
              "common_random_numbers", "output_dir"},
             "config");

  ExperimentConfig c;
  if (doc.contains("environment")) c.environment = parse_environment(doc["environment"]);
  if (doc.contains("policies")) c.policies = get_field<std::vector<std::string>>(doc, "policies");
  if (doc.contains("T")) c.horizon = get_count(doc, "T");
  if (doc.contains("runs")) c.runs = get_count(doc, "runs");
  if (doc.contains("base_seed")) c.base_seed = get_count(doc, "base_seed");
  if (doc.contains("tau")) c.tau = get_field<double>(doc, "tau");
  if (doc.contains("window") && !doc["window"].is_null()) c.window = get_count(doc, "window");
  if (doc.contains("ma_window") && !doc["ma_window"].is_null()) {
    c.ma_window = get_count(doc, "ma_window");
  }
  if (doc.contains("common_random_numbers")) {
    c.common_random_numbers = get_field<bool>(doc, "common_random_numbers");
  }
  if (doc.contains("output_dir")) c.output_dir = get_field<std::string>(doc, "output_dir");
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json env = {{"name", c.environment.name}, {"segment_len", c.environment.segment_len}};
  if (!c.environment.anchors.empty()) env["anchors"] = c.environment.anchors;

  json doc = {{"environment", env},
              {"policies", c.policies},
              {"T", c.horizon},
              {"runs", c.runs},
              {"base_seed", c.base_seed},
              {"tau", c.tau},
              {"window", c.window ? json(*c.window) : json(nullptr)},
              {"ma_window", c.ma_window ? json(*c.ma_window) : json(nullptr)},
              {"common_random_numbers", c.common_random_numbers},
              {"output_dir", c.output_dir}};
  return doc.dump(2);
}

}  // namespace conbandit
