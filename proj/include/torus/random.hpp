#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace torus {

/// Seeded sample source shared by every statistics routine. The generator is
/// std::mt19937_64; a uniform double in (0,1) is (u >> 11) * 2^-53 with exact
/// zeros redrawn, so streams are identical across standard libraries.
class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed) : engine_(seed) {}

  double open_unit() {
    for (;;) {
      double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Uniform in [0,1).
  double half_open_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::vector<double> open_unit(std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) v = open_unit();
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace torus
