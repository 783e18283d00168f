#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace auif {

/// Deterministic random source. Distribution math is done by hand on top of
/// mt19937_64 so that streams are bit-reproducible across standard libraries
/// (std::normal_distribution is implementation-defined).
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t raw() { return eng_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be > 0.
    uint64_t uniform_int(uint64_t bound) { return eng_() % bound; }

    /// Box-Muller normal draw.
    double normal(double mean, double stddev) {
        if (!have_spare_) {
            double u1 = uniform01();
            double u2 = uniform01();
            // keep log argument away from zero
            if (u1 < 1e-300) u1 = 1e-300;
            double r = std::sqrt(-2.0 * std::log(u1));
            double theta = 2.0 * M_PI * u2;
            spare_ = r * std::sin(theta);
            have_spare_ = true;
            return mean + stddev * r * std::cos(theta);
        }
        have_spare_ = false;
        return mean + stddev * spare_;
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace auif
