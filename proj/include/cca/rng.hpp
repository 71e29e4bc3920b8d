#pragma once

#include <cstdint>

namespace cca {

/// Counter-based uniform stream: U_n is a pure function of (seed, n), so two
/// runs that differ only in the initial past consume identical uniforms.
class CounterUniforms {
 public:
  explicit CounterUniforms(std::uint64_t seed) noexcept : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  /// 53-bit uniform in [0, 1).
  double operator()(std::uint64_t n) const noexcept {
    const std::uint64_t bits = mix(mix(n + key_) ^ key_);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  std::uint64_t key() const noexcept { return key_; }

  /// splitmix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

/// Derives the seed of sub-stream `stream` from a master seed.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return CounterUniforms::mix(seed + CounterUniforms::mix(stream + 0x3c6ef372fe94f82bULL));
}

}  // namespace cca
