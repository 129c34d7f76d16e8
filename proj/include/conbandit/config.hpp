#pragma once

#include <string>
#include <string_view>

#include "conbandit/sim.hpp"

namespace conbandit {

/// Parses an ExperimentConfig from JSON. Keys mirror the struct fields:
///
///   {
///     "environment": "gradual" | {"name": "nonstationary",
///                                 "anchors": ["gradual", ...], "segment_len": 250},
///     "policies": ["con-ts", "uts", "con-kl-ucb"],
///     "T": 10000, "runs": 64, "base_seed": 1, "tau": 0.75,
///     "window": 100, "ma_window": 100,
///     "common_random_numbers": true, "output_dir": "out"
///   }
///
/// Missing keys keep their defaults; unknown keys are rejected. A metadata
/// document written by a previous run (config nested under "config") is
/// accepted as well. Throws ConfigError; the result is validated.
ExperimentConfig parse_config(std::string_view json_text);

/// Fully resolved config as JSON; parse_config(config_to_json(c)) == c.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace conbandit
