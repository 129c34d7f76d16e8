#include "conbandit/rng.hpp"

namespace conbandit {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view label,
                          std::uint64_t index) noexcept {
  std::uint64_t label_hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : label) {
    label_hash ^= c;
    label_hash *= 0x100000001B3ULL;
  }
  std::uint64_t state = base_seed;
  std::uint64_t out = splitmix64(state);
  state ^= label_hash;
  out ^= splitmix64(state);
  state ^= index;
  out ^= splitmix64(state);
  return out;
}

double Rng::uniform() noexcept {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::beta(double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(engine_);
  const double y = gb(engine_);
  if (x + y <= 0.0) return 0.5;
  return x / (x + y);
}

std::size_t Rng::categorical(std::span<const double> probs) noexcept {
  const double u = uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = k;
    cumulative += probs[k];
    if (u < cumulative) return k;
  }
  // Rounding left the cumulative sum just under u.
  return last_positive;
}

}  // namespace conbandit
