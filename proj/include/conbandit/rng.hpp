#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace conbandit {

/// Name recorded in run metadata so outputs can be traced to the generator.
inline constexpr std::string_view kGeneratorName = "mt19937_64 (splitmix64 seed derivation)";

/// One step of the splitmix64 sequence; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Derives an independent stream seed from (base seed, label, index).
/// The label is folded in with 64-bit FNV-1a, then all three words are
/// pushed through splitmix64 so nearby inputs give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view label,
                          std::uint64_t index) noexcept;

/// Seedable random stream. Every draw is a pure function of the seed and
/// the sequence of prior calls.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits; consumes one engine word.
  double uniform() noexcept;

  /// Beta(a, b) via two gamma variates. a, b > 0.
  double beta(double a, double b);

  /// Inverse-CDF sample over indices in ascending order using one uniform.
  /// Never returns an index with zero mass.
  std::size_t categorical(std::span<const double> probs) noexcept;

 private:
  std::mt19937_64 engine_;
};

}  // namespace conbandit
