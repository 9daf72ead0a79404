/// \file rng.hpp
/// Seedable standard-normal sampler with a fully specified algorithm:
/// mt19937_64 (bit-exact across platforms per the C++ standard) drives
/// Box-Muller. Streams are identical for a given seed up to libm rounding.

#ifndef KSHIFT_RNG_HPP
#define KSHIFT_RNG_HPP

#include "kshift/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace kshift {

class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform in (0, 1], 53-bit resolution.
  double uniform() {
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal N(0, 1).
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Complex normal with unit variance per entry: (N + iN) / sqrt(2).
  Scalar next_complex() {
    const double re = next();
    const double im = next();
    return Scalar(re, im) / std::sqrt(2.0);
  }

  /// One entry of the field requested: real N(0,1) or unit-variance complex.
  Scalar next_in(Field field) {
    return field == Field::Real ? Scalar(next(), 0.0) : next_complex();
  }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kshift

#endif
