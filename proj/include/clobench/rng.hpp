#ifndef CLOBENCH_RNG_HPP
#define CLOBENCH_RNG_HPP

#include <cstdint>
#include <cmath>

namespace clobench {

/**
 * RngStream - splittable counter-style generator for reproducible
 * Monte Carlo runs.
 *
 * Design (frozen; golden tests depend on it):
 *   - Core step is the SplitMix construction: the 64-bit state advances
 *     by a per-stream odd increment ("gamma") and the output is the
 *     murmur-style 64-bit finalizer of the new state.
 *   - Substreams are derived by label, not by drawing: derive(a, b, c)
 *     hashes the parent's immutable key together with the three labels,
 *     so a substream is reproducible no matter how much the parent has
 *     been consumed. The harness uses labels (phase, n, replication).
 *   - Doubles in [0,1) take the top 53 bits: (u >> 11) * 2^-53.
 *   - Standard normals use the Marsaglia polar transform (no trig);
 *     the second variate of each pair is cached.
 *   - Bounded integers use rejection sampling (no modulo bias).
 *
 * All operations are pure integer/IEEE arithmetic on uint64, so the
 * uniform stream is bit-stable across platforms; normal variates
 * additionally depend on libm's log().
 */
class RngStream {
 public:
  explicit RngStream(std::uint64_t key)
      : key_(key), state_(key), gamma_(mix_gamma(key ^ 0x589965CC75374CC3ULL)) {}

  /// Root stream for a user-facing seed.
  static RngStream from_seed(std::uint64_t seed) { return RngStream(mix64(seed ^ kSeedSalt)); }

  /// Labeled substream, independent of this stream's draw position.
  RngStream derive(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    std::uint64_t h = key_;
    h = mix64(h ^ 0xA0761D6478BD642FULL ^ a);
    h = mix64(h ^ 0xE7037ED1A0B428DBULL ^ b);
    h = mix64(h ^ 0x8EBC6AF09C88C6E3ULL ^ c);
    return RngStream(h);
  }

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() {
    state_ += gamma_;
    return mix64(state_);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  /// Uniform integer in [0, bound), unbiased. bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r < threshold);
    return r % bound;
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kSeedSalt = 0x9E3779B97F4A7C15ULL;

  // Odd increment with enough bit transitions, as in SplittableRandom.
  static std::uint64_t mix_gamma(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
    z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
    z = (z ^ (z >> 33)) | 1ULL;
    const int transitions = __builtin_popcountll(z ^ (z >> 1));
    return (transitions < 24) ? z ^ 0xAAAAAAAAAAAAAAAAULL : z;
  }

  std::uint64_t key_;
  std::uint64_t state_;
  std::uint64_t gamma_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace clobench

#endif  // CLOBENCH_RNG_HPP
