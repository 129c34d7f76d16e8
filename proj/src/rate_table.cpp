#include "conbandit/rate_table.hpp"

#include <cmath>
#include <string>

#include "conbandit/errors.hpp"

namespace conbandit {

RateTable::RateTable(std::vector<double> rates_mbps) : rates_(std::move(rates_mbps)) {
  if (rates_.empty()) {
    throw ContractViolation("rate table needs at least one rate");
  }
  for (std::size_t k = 0; k < rates_.size(); ++k) {
    if (!std::isfinite(rates_[k]) || rates_[k] <= 0.0) {
      throw ContractViolation("rate " + std::to_string(k) + " must be positive and finite");
    }
    if (k > 0 && !(rates_[k - 1] < rates_[k])) {
      throw ContractViolation("rates must be strictly increasing (index " + std::to_string(k) +
                              ")");
    }
  }
}

RateTable RateTable::scaled(double factor) const {
  std::vector<double> out(rates_);
  for (double& r : out) r *= factor;
  return RateTable(std::move(out));
}

RateTable wifi_rates() { return RateTable({6, 9, 12, 18, 24, 36, 48, 54}); }

}  // namespace conbandit
