#include "conbandit/env.hpp"

#include <algorithm>
#include <cctype>

#include "conbandit/errors.hpp"

namespace conbandit {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::Gradual:
      return "gradual";
    case Preset::Lossy:
      return "lossy";
    case Preset::Steep:
      return "steep";
    case Preset::Linear:
      return "linear";
  }
  return "unknown";
}

Preset parse_preset(std::string_view name) {
  const std::string key = lowercase(name);
  for (Preset p : kAllPresets) {
    if (key == to_string(p)) return p;
  }
  throw ConfigError("unknown environment '" + std::string(name) +
                    "' (expected gradual, lossy, steep, linear)");
}

const std::vector<double>& preset_success_probs(Preset preset) {
  static const std::vector<double> gradual{0.95, 0.90, 0.80, 0.65, 0.45, 0.25, 0.15, 0.10};
  static const std::vector<double> lossy{0.90, 0.80, 0.70, 0.55, 0.45, 0.35, 0.20, 0.10};
  static const std::vector<double> steep{0.99, 0.98, 0.96, 0.93, 0.90, 0.10, 0.06, 0.04};
  static const std::vector<double> linear{1.00, 0.87, 0.75, 0.62, 0.50, 0.37, 0.25, 0.12};
  switch (preset) {
    case Preset::Gradual:
      return gradual;
    case Preset::Lossy:
      return lossy;
    case Preset::Steep:
      return steep;
    case Preset::Linear:
      return linear;
  }
  throw ContractViolation("unhandled preset");
}

EnvironmentSchedule::EnvironmentSchedule(std::string name, RateTable rates,
                                         std::vector<std::vector<double>> anchors,
                                         std::size_t segment_len)
    : name_(std::move(name)),
      rates_(std::move(rates)),
      anchors_(std::move(anchors)),
      segment_len_(segment_len) {
  if (anchors_.empty()) throw ContractViolation("schedule needs at least one anchor");
  if (segment_len_ == 0) throw ContractViolation("segment length must be >= 1");
  for (const auto& a : anchors_) {
    if (a.size() != rates_.size()) throw ContractViolation("anchor length differs from K");
    for (double mu : a) {
      if (!(mu >= 0.0 && mu <= 1.0)) throw ContractViolation("anchor value outside [0,1]");
    }
  }
}

bool EnvironmentSchedule::stationary() const noexcept {
  return std::all_of(anchors_.begin(), anchors_.end(),
                     [this](const auto& a) { return a == anchors_.front(); });
}

std::vector<double> EnvironmentSchedule::success_probs(std::uint64_t t) const {
  if (t == 0) throw ContractViolation("interval index starts at 1");
  if (anchors_.size() == 1) return anchors_.front();

  const std::uint64_t offset = t - 1;
  const std::uint64_t segment = offset / segment_len_;
  const double frac =
      static_cast<double>(offset % segment_len_) / static_cast<double>(segment_len_);
  const auto& from = anchors_[segment % anchors_.size()];
  const auto& to = anchors_[(segment + 1) % anchors_.size()];

  std::vector<double> mu(from.size());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    mu[k] = std::clamp(from[k] + (to[k] - from[k]) * frac, 0.0, 1.0);
  }
  return mu;
}

EnvironmentSchedule preset(Preset which) {
  return EnvironmentSchedule(std::string(to_string(which)), wifi_rates(),
                             {preset_success_probs(which)}, 1);
}

EnvironmentSchedule preset(std::string_view name) { return preset(parse_preset(name)); }

EnvironmentSchedule interpolated(const std::vector<Preset>& anchors, std::size_t segment_len) {
  if (anchors.size() < 2) throw ConfigError("interpolated environment needs at least 2 anchors");
  if (segment_len == 0) throw ConfigError("segment length must be >= 1");
  std::vector<std::vector<double>> mus;
  for (Preset p : anchors) mus.push_back(preset_success_probs(p));
  return EnvironmentSchedule("nonstationary", wifi_rates(), std::move(mus), segment_len);
}

bool draw_outcome(const EnvironmentSchedule& schedule, std::uint64_t t, std::size_t arm,
                  Rng& rng) {
  if (arm >= schedule.num_arms()) throw ContractViolation("arm index out of range");
  const double u = rng.uniform();
  return u < schedule.success_probs(t)[arm];
}

}  // namespace conbandit
