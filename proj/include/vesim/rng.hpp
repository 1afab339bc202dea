#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vesim {

// Deterministic uniform draws. std::uniform_real_distribution is not pinned
// across standard libraries, so map the raw 64-bit output ourselves: the top
// 53 bits scaled into [0, 1) give identical streams on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Log-uniform: uniform in the exponent, for spans covering decades.
    double log_uniform(double lo, double hi);

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

inline double Rng::log_uniform(double lo, double hi) {
    return lo * std::pow(hi / lo, uniform01());
}

}  // namespace vesim
