#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hrvfl {

/// SplitMix64 finalizer: a bijective 64-bit mixing function.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives a child seed from a parent seed and a component value. Distinct
/// components give statistically independent child streams.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t component) noexcept;

/// FNV-1a over the bytes of `s`. Used to fold names into seed derivations.
std::uint64_t hash_string(std::string_view s) noexcept;

/// Pseudo-random generator used by every stochastic component.
///
/// Algorithm: xoshiro256** 1.0 whose 256-bit state is filled by four
/// successive SplitMix64 outputs starting from the 64-bit seed. Doubles are
/// the top 53 bits scaled by 2^-53; bounded integers use Lemire's
/// multiply-and-reject method. This is part of the reproducibility contract:
/// any reimplementation following these rules produces the same draws.
/// Normals use the cosine branch of Box-Muller on (1 - u1, u2).
class Rng {
 public:
  static constexpr std::string_view algorithm = "xoshiro256**/splitmix64 v1";

  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() noexcept;

  /// Independent generator seeded from this generator's seed and `component`.
  Rng split(std::uint64_t component) const noexcept { return Rng(derive_seed(seed_, component)); }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

/// In-place Fisher-Yates shuffle (back to front).
void shuffle(std::span<std::size_t> values, Rng& rng) noexcept;

/// k distinct indices drawn uniformly from [0, n), in draw order. Partial
/// Fisher-Yates over the identity permutation.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

}  // namespace hrvfl
