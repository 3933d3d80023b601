#pragma once

#include <cmath>
#include <cstdint>

namespace mvbd {

namespace detail {
// splitmix64 output mixing function (Vigna). Also used as a key hasher.
inline std::uint64_t sm64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Combines a hash with another word; used to derive independent substreams
// from (seed, iteration, i, l, r) counters so the augmentation step and the
// simulator are reproducible regardless of evaluation order or thread count.
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return detail::sm64_mix(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 12) + (h >> 4)));
}

// Small, portable generator with hand-rolled variate transforms. The standard
// library distributions are implementation-defined, so everything here is
// spelled out to keep runs bit-reproducible across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return detail::sm64_mix(z);
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs of the
  // result stay finite.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Uniform integer in [0, n). Multiply-shift map; the bias is < n / 2^64.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // One standard normal via Box-Muller (single branch, no cached spare).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }
  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential() { return -std::log(uniform()); }

  // Marsaglia-Tsang for shape >= 1; boosting for shape < 1. Unit scale.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

 private:
  std::uint64_t state_;
};

// Identifies the randomness of one MCMC sweep; per-cell generators are derived
// from it by hashing in the cell coordinates.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;

  std::uint64_t base() const {
    return hash_combine(hash_combine(0x6d76626400000001ULL, seed), iteration);
  }
  Rng stream(std::uint64_t a) const { return Rng(hash_combine(base(), a)); }
  Rng stream(std::uint64_t a, std::uint64_t b) const {
    return Rng(hash_combine(hash_combine(base(), a), b));
  }
  Rng stream(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return Rng(hash_combine(hash_combine(hash_combine(base(), a), b), c));
  }
};

}  // namespace mvbd
