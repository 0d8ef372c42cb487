#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sclab {

// Deterministic random source: a fixed engine plus explicit mappings to
// doubles, so streams are reproducible across platforms and library
// versions for a given seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1).
  double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform01_open0() { return ((eng_() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller on explicit uniforms.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01_open0();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, n).
  uint64_t uniform_int(uint64_t n) {
    // Rejection sampling keeps the distribution exact and deterministic.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sclab
