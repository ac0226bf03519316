#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qbayes {

// xoshiro256** 1.0 (Blackman & Vigna), state seeded from a 64-bit value
// through splitmix64. Normal deviates use the Box-Muller transform on two
// uniforms from next_double(), so a port that implements the same three
// pieces reproduces every stream bit for bit.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  static constexpr const char* kAlgorithm = "xoshiro256**/splitmix64/box-muller";

  explicit Xoshiro256(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  // Uniform on [0, 1) with 53 random bits.
  double next_double() noexcept;

  // Standard normal deviate.
  double next_normal() noexcept;

  // Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Per-trial stream: seed XOR trial index, so results do not depend on
// the order trials are scheduled in.
inline Xoshiro256 trial_rng(std::uint64_t seed, std::uint64_t trial) noexcept {
  return Xoshiro256(seed ^ trial);
}

}  // namespace qbayes
