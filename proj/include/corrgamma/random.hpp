#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace corrgamma {

/// Counter-based 64-bit random stream.
///
/// Output i is a SplitMix64 finalizer applied to `key + i * golden`, so a
/// stream is fully determined by (key, counter). Independent streams for
/// parallel workers come from `split(index)`. A stream has a single owner;
/// it must not be shared across threads.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : seed_(seed), key_(mix(seed ^ kSeedSalt)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    // 53 random bits shifted by half an ulp so neither endpoint is reachable.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal variate (Marsaglia polar method, spare value cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Derived stream for worker `index`; independent of this stream's position.
  CounterRng split(std::uint64_t index) const {
    CounterRng child(seed_);
    child.key_ = mix(key_ ^ mix(index + kGolden));
    return child;
  }

  /// Seed this stream (or the stream it was split from) was created with.
  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x5851F42D4C957F2DULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace corrgamma
