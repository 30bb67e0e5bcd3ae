#pragma once

#include <cstdint>
#include <random>

namespace tjd {

/// SplitMix64 finalizer.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `stream` derived from a master seed:
/// splitmix64(master ^ splitmix64(stream)). Stream 0 is the default stream.
inline uint64_t stream_seed(uint64_t master, uint64_t stream) { return splitmix64(master ^ splitmix64(stream)); }

/// Portable random source: std::mt19937_64 (sequence fixed by the standard)
/// with hand-written conversions, so draws are identical on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0) : engine_(stream_seed(seed, stream)) {}

  uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n) by rejection, n > 0.
  uint64_t index(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }
  /// Standard normal by Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Fresh 64-bit seed from the system entropy source.
uint64_t random_seed();

}  // namespace tjd
