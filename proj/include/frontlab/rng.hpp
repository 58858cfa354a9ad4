#pragma once

// Counter-based randomness built on SplitMix64.
//
// Stream discipline: every independent unit of work owns a key derived by
// hashing the run seed with the unit's coordinates, e.g.
//   replica_seed(seed, replica)            one stream per replica
//   site_key(seed, a, b)                   one stream per lattice site
//   derive_key(seed, particle_index)       one stream per walker
// A stream is then consumed sequentially through Rng. Because keys depend
// only on (seed, coordinates) and never on scheduling, results are
// bit-identical for any worker count, and a sample restricted to a
// sub-region equals the sample drawn on the sub-region directly.

#include <cmath>
#include <cstdint>

namespace frontlab {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Steele, Lea, Flood; java.util.SplittableRandom).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_key(std::uint64_t key, std::uint64_t word) {
    return mix64(key ^ (mix64(word + kGolden) + kGolden));
}

inline std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
    return derive_key(seed, replica);
}

inline std::uint64_t site_key(std::uint64_t seed, std::int64_t a, std::int64_t b) {
    return derive_key(derive_key(seed, static_cast<std::uint64_t>(a)),
                      static_cast<std::uint64_t>(b));
}

class Rng {
  public:
    explicit Rng(std::uint64_t key) : state_(key) {}

    std::uint64_t next() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53 significant bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n) via the multiply-shift map; bias is n / 2^64.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Poisson(mean). Product method below 10, Hormann's PTRD rejection above.
    std::uint64_t next_poisson(double mean) {
        return mean < 10.0 ? poisson_small(mean) : poisson_ptrd(mean);
    }

  private:
    std::uint64_t poisson_small(double mean) {
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t k = 0;
        do {
            prod *= next_double();
            ++k;
        } while (prod > limit);
        return k - 1;
    }

    // Transformed rejection with decomposition (Hormann 1993), valid for mean >= 10.
    std::uint64_t poisson_ptrd(double mean) {
        const double smu = std::sqrt(mean);
        const double b = 0.931 + 2.53 * smu;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mean = std::log(mean);
        for (;;) {
            double v = next_double();
            double u;
            if (v <= 0.86 * v_r) {
                u = v / v_r - 0.43;
                return static_cast<std::uint64_t>(
                    std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + mean + 0.445));
            }
            if (v >= v_r) {
                u = next_double() - 0.5;
            } else {
                u = v / v_r - 0.93;
                u = (u < 0 ? -0.5 : 0.5) - u;
                v = next_double() * v_r;
            }
            const double us = 0.5 - std::fabs(u);
            if (us < 0.013 && v > us) continue;
            const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
            v = v * inv_alpha / (a / (us * us) + b);
            if (k >= 10.0) {
                if (std::log(v * smu) <=
                    (k + 0.5) * std::log(mean / k) - mean - 0.5 * std::log(2 * 3.14159265358979323846) +
                        k - (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k) {
                    return static_cast<std::uint64_t>(k);
                }
            } else if (k >= 0.0) {
                if (std::log(v) <= k * log_mean - mean - std::lgamma(k + 1.0)) {
                    return static_cast<std::uint64_t>(k);
                }
            }
        }
    }

    std::uint64_t state_;
};

}  // namespace frontlab
