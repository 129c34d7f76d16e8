#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace conbandit {

/// The K selectable transmission rates in Mbps, strictly increasing.
class RateTable {
 public:
  /// Throws ContractViolation if empty, non-positive or not strictly increasing.
  explicit RateTable(std::vector<double> rates_mbps);

  std::size_t size() const noexcept { return rates_.size(); }
  double operator[](std::size_t k) const { return rates_[k]; }
  std::span<const double> values() const noexcept { return rates_; }
  double max_rate() const noexcept { return rates_.back(); }

  /// Same table with every rate multiplied by a positive factor.
  RateTable scaled(double factor) const;

  friend bool operator==(const RateTable&, const RateTable&) = default;

 private:
  std::vector<double> rates_;
};

/// The 802.11a/g rate set: 6, 9, 12, 18, 24, 36, 48, 54 Mbps.
RateTable wifi_rates();

}  // namespace conbandit
