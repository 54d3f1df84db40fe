#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace dyadkit {

// Counter-based generator (Philox4x32-10).  Every output is a pure function of
// (seed, stream_id, counter); streams are cheap to split and never share state.
class RandomStream {
 public:
  constexpr RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0,
                         std::uint64_t counter = 0) noexcept
      : seed_(seed), stream_(stream_id), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

  // A fresh stream under the same seed; ids are caller-assigned work-item keys.
  RandomStream substream(std::uint64_t stream_id) const noexcept {
    return RandomStream(seed_, stream_id, 0);
  }

  // Child stream for work item k, keyed by this stream's id and k.
  RandomStream split(std::uint64_t k) const noexcept;

  static std::uint64_t at(std::uint64_t seed, std::uint64_t stream_id,
                          std::uint64_t counter) noexcept {
    const auto block = philox(seed, stream_id, counter >> 1);
    const unsigned half = static_cast<unsigned>(counter & 1u) * 2u;
    return (static_cast<std::uint64_t>(block[half]) << 32) | block[half + 1];
  }

  std::uint64_t next_u64() noexcept { return at(seed_, stream_, counter_++); }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., bound-1}; bound must be positive.  Lemire's
  // multiply-shift with rejection, so the result is exactly unbiased.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool next_bernoulli(double p) noexcept { return next_double() < p; }

  // Standard normal via Box-Muller; consumes two counters per draw.
  double next_gaussian() noexcept {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::array<std::uint32_t, 4> philox(std::uint64_t key,
                                             std::uint64_t hi,
                                             std::uint64_t lo) noexcept {
    std::uint32_t c0 = static_cast<std::uint32_t>(lo);
    std::uint32_t c1 = static_cast<std::uint32_t>(lo >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(hi);
    std::uint32_t c3 = static_cast<std::uint32_t>(hi >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0;
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2;
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return {c0, c1, c2, c3};
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
};

// Stateless 64-bit mixer (splitmix64 finalizer) used for procedural membership.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline RandomStream RandomStream::split(std::uint64_t k) const noexcept {
  return RandomStream(seed_, mix64(stream_ ^ mix64(k + 0x5851F42D4C957F2Dull)), 0);
}

}  // namespace dyadkit
