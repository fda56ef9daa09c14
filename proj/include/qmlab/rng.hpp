#pragma once

#include <cstdint>
#include <random>

#include "qmlab/linalg.hpp"

namespace qmlab {

// Deterministic random source. The raw engine is standardized, but the
// standard distributions are not, so uniform and normal variates are derived
// here by hand to make output byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via Box-Muller. No caching: each call consumes exactly
  // two engine draws, which keeps the stream position predictable.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  Complex cnormal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im);
  }

  // Uniform integer in [0, n).
  std::uint64_t integer(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qmlab
