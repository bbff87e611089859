#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "oudrift/types.hpp"

namespace oudrift {

/// splitmix64 finalizer. Stateless 64-bit mixer used for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream splitting: the seed of a substream is a hash chain over the master
/// seed and the stream labels, e.g. derive_seed(master, {d, rep, 0}) for the
/// model of replication `rep` at dimension `d` and {d, rep, 1} for its path.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> labels) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t label : labels) h = mix64(h ^ label);
  return h;
}

/// Deterministic random stream: mt19937_64 (output sequence fixed by the
/// standard, so identical across platforms) with gaussians via Box-Muller on
/// 53-bit uniforms. One Rng per logical stream; never shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n >= 1, unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = gen_();
      if (r >= threshold) return r % n;
    }
  }

  /// Standard gaussian, Box-Muller pair with one value cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 == 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Vector gaussian_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace oudrift
