#ifndef HGSIM_RNG_HPP
#define HGSIM_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace hgsim {

// Counter-based generator (Philox4x32-10). A draw is a pure function of
// (seed, stream, counter), so trajectory i can use stream i and ensembles
// stay reproducible under any parallel schedule.
namespace philox {

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t stream,
                                          std::uint64_t counter) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo32(M0, c[0], hi0, lo0);
    mulhilo32(M1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += W0;
    k1 += W1;
  }
  return c;
}

}  // namespace philox

/// Deterministic per-stream random source; all state is (seed, stream, counter).
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    auto b = philox::block(seed_, stream_, counter_++);
    spare_ = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
    have_spare_ = true;
    return (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  }

  /// Uniform in (0, 1] (safe for log).
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal pair via Box-Muller.
  std::array<double, 2> next_normal_pair() {
    double u1 = next_unit_open();
    double u2 = next_unit();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * M_PI * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace hgsim

#endif
