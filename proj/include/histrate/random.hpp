#pragma once

#include <cstdint>
#include <random>

namespace histrate {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mixes a master seed with up to two stream indices into an engine seed.
/// Distinct (master, a, b) triples give statistically independent streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                                 std::uint64_t b = 0) {
  std::uint64_t state = master;
  std::uint64_t h = splitmix64(state);
  state ^= a * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL;
  h ^= splitmix64(state);
  state ^= b * 0xc4ceb9fe1a85ec53ULL + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(state);
  return h;
}

/// Deterministic double-precision random stream.  All draws are built from
/// raw mt19937_64 output, so identical seeds give bit-identical sequences on
/// every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(derive_seed(seed)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1, 1).
  double symmetric() { return 2.0 * unit() - 1.0; }

  std::uint64_t bits() { return eng_(); }

  bool coin() { return (eng_() >> 63) != 0; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace histrate
