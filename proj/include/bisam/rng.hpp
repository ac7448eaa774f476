#pragma once

// Counter-based random draws. Every value is a pure function of
// (key, stream, counter), so any subset of draws can be produced in any
// order, on any number of threads, with identical results on every platform.
//
// Construction: the SplitMix64 finalizer (Stafford variant 13) applied in a
// chain over the key, the stream index and the counter, each offset by a
// distinct odd constant. The top 53 bits form a double in [0, 1).

#include <cstdint>

namespace bisam::rng {

[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t keyed_bits(std::uint64_t key, std::uint64_t stream,
                                                 std::uint64_t counter) noexcept {
  std::uint64_t h = mix64(key + 0x9E3779B97F4A7C15ull);
  h = mix64(h ^ (stream + 0xD1B54A32D192ED03ull));
  h = mix64(h ^ (counter + 0x8CB92BA72F3D8DD7ull));
  return h;
}

[[nodiscard]] constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

[[nodiscard]] constexpr double keyed_uniform(std::uint64_t key, std::uint64_t stream,
                                             std::uint64_t counter) noexcept {
  return to_unit(keyed_bits(key, stream, counter));
}

// Domain tags keep the draw families of different consumers disjoint.
inline constexpr std::uint64_t kThresholdDomain = 0x7468726573686f6cull;  // "threshol"
inline constexpr std::uint64_t kGenerateDomain = 0x67656e6572617465ull;   // "generate"
inline constexpr std::uint64_t kModelDomain = 0x70726f6261626c65ull;      // "probable"

/// The per-transaction threshold r_t in [0, 1) shared by the in-memory,
/// adaptive and external-memory samplers.
[[nodiscard]] constexpr double transaction_threshold(std::uint64_t seed,
                                                     std::uint64_t transaction) noexcept {
  return keyed_uniform(seed ^ kThresholdDomain, transaction, 0);
}

}  // namespace bisam::rng
