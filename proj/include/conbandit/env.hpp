#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "conbandit/rate_table.hpp"
#include "conbandit/rng.hpp"

namespace conbandit {

enum class Preset { Gradual, Lossy, Steep, Linear };

inline constexpr Preset kAllPresets[] = {Preset::Gradual, Preset::Lossy, Preset::Steep,
                                         Preset::Linear};

std::string_view to_string(Preset preset);
/// Case-insensitive. Throws ConfigError for an unknown name.
Preset parse_preset(std::string_view name);
/// Success probabilities of a preset over the eight WiFi rates.
const std::vector<double>& preset_success_probs(Preset preset);

/// Ground-truth success probabilities mu_k(t), t = 1, 2, ...
///
/// A schedule is a cyclic list of anchor vectors joined by linear ramps of
/// `segment_len` intervals. Segment s (covering t = s*L + 1 .. (s+1)*L) runs
/// from anchor s mod n to anchor (s+1) mod n, so with anchors [A, B, C, A]
/// the fourth segment is a flat stretch at A. A single anchor gives a
/// stationary schedule.
class EnvironmentSchedule {
 public:
  EnvironmentSchedule(std::string name, RateTable rates, std::vector<std::vector<double>> anchors,
                      std::size_t segment_len);

  const std::string& name() const noexcept { return name_; }
  const RateTable& rates() const noexcept { return rates_; }
  std::size_t num_arms() const noexcept { return rates_.size(); }
  bool stationary() const noexcept;

  /// mu(t) evaluated at the start of interval t (t >= 1).
  std::vector<double> success_probs(std::uint64_t t) const;

 private:
  std::string name_;
  RateTable rates_;
  std::vector<std::vector<double>> anchors_;
  std::size_t segment_len_;
};

EnvironmentSchedule preset(Preset which);
EnvironmentSchedule preset(std::string_view name);

/// Anchors default to Gradual, Lossy, Steep, Gradual with 250-interval segments.
EnvironmentSchedule interpolated(const std::vector<Preset>& anchors, std::size_t segment_len);

/// Bernoulli(mu_arm(t)); consumes exactly one uniform.
bool draw_outcome(const EnvironmentSchedule& schedule, std::uint64_t t, std::size_t arm, Rng& rng);

}  // namespace conbandit
