#pragma once

// Single-walker distributions on the triangular lattice.
//
//   exact_distribution(t)  pi_t by t-fold convolution of the uniform
//                           6-neighbor step (dense rhombic grid internally)
//   lclt_density(t, r)     sqrt(3)/(2 pi t) * exp(-r^2/t), the local CLT
//                          density valid uniformly for ||z|| <= t^{9/16}
//   hoeffding_envelope     C * exp(-r^2 / 2t), an everywhere-valid upper
//                          bound on pi_t
//   cumulative_kernel(t)   rho_t = sum_{u<=t} pi_u
//   exp_integral(x)        E1(x), series below 1, continued fraction above
//   rho_bar(t, r)          sqrt(3)/(2 pi) * E1(r^2/t), continuum form of rho_t

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "frontlab/lattice.hpp"
#include "frontlab/parallel.hpp"

namespace frontlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Cost of the exact convolution is Theta(t^3); this cap keeps a single call
// under a few hundred MB and a couple of minutes.
inline constexpr std::int32_t kDefaultConvolutionCap = 4096;

class resource_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Dense kernel over the rhombus [-t, t]^2 in (a, b); sites outside the
// hex-disk of radius t carry exact zeros.
class WalkField {
  public:
    WalkField(std::int32_t t, std::int32_t radius, std::vector<double> values)
        : t_(t), radius_(radius), width_(2 * radius + 1), values_(std::move(values)) {}

    std::int32_t t() const { return t_; }
    std::int32_t radius() const { return radius_; }

    double value(SitePos z) const {
        if (std::abs(z.a) > radius_ || std::abs(z.b) > radius_) return 0.0;
        return values_[index(z)];
    }

    template <typename Fn>
    void for_each_nonzero(Fn&& fn) const {
        for (std::int32_t a = -radius_; a <= radius_; ++a) {
            for (std::int32_t b = -radius_; b <= radius_; ++b) {
                const double v = values_[index({a, b})];
                if (v != 0.0) fn(SitePos{a, b}, v);
            }
        }
    }

    double total_mass() const {
        // Compensated so the t <= 512 conservation check measures the
        // convolution, not this reduction.
        double sum = 0.0, carry = 0.0;
        for (double v : values_) {
            const double y = v - carry;
            const double s = sum + y;
            carry = (s - sum) - y;
            sum = s;
        }
        return sum;
    }

  protected:
    std::size_t index(SitePos z) const {
        return static_cast<std::size_t>(z.b + radius_) * width_ +
               static_cast<std::size_t>(z.a + radius_);
    }

    std::int32_t t_;
    std::int32_t radius_;
    std::size_t width_;
    std::vector<double> values_;
};

class CumulativeField : public WalkField {
  public:
    using WalkField::WalkField;
};

namespace detail {

// One convolution step: next = average of the six neighbors of cur.
// Opposite neighbors are added pairwise; the balanced tree keeps the sums
// symmetric and makes small-t values exact (pi_1 = 1/6, pi_2(0) = 1/6).
inline void convolve_step(const std::vector<double>& cur, std::vector<double>& next,
                          std::int32_t radius, std::int32_t active, int threads) {
    const std::size_t width = 2 * static_cast<std::size_t>(radius) + 1;
    const double inv6 = 1.0 / 6.0;
    parallel_chunks(2 * static_cast<std::int64_t>(active) + 1, threads,
                    [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t row = lo; row < hi; ++row) {
            const std::int32_t b = static_cast<std::int32_t>(row) - active;
            const std::size_t base = static_cast<std::size_t>(b + radius) * width +
                                     static_cast<std::size_t>(radius);
            for (std::int32_t a = -active; a <= active; ++a) {
                const std::size_t i = base + a;
                const double east_west = cur[i + 1] + cur[i - 1];
                const double north_south = cur[i + width] + cur[i - width];
                const double diag = cur[i + width - 1] + cur[i - width + 1];
                next[i] = ((east_west + north_south) + diag) * inv6;
            }
        }
    });
}

}  // namespace detail

// pi_t for every site, exact up to floating-point accumulation.
inline WalkField exact_distribution(std::int32_t t, std::int32_t cap = kDefaultConvolutionCap,
                                    int threads = 0) {
    if (t < 0) throw std::invalid_argument("exact_distribution: t must be >= 0");
    if (t > cap) {
        throw resource_error("exact_distribution: t = " + std::to_string(t) +
                             " exceeds convolution cap " + std::to_string(cap));
    }
    if (threads <= 0) threads = default_thread_count();
    const std::int32_t radius = t + 1;  // one zero ring so the stencil needs no bounds checks
    const std::size_t width = 2 * static_cast<std::size_t>(radius) + 1;
    std::vector<double> cur(width * width, 0.0), next(width * width, 0.0);
    cur[static_cast<std::size_t>(radius) * width + radius] = 1.0;
    for (std::int32_t u = 1; u <= t; ++u) {
        detail::convolve_step(cur, next, radius, u, threads);
        cur.swap(next);
    }
    return WalkField(t, radius, std::move(cur));
}

// rho_t(z) = sum_{u=0}^{t} pi_u(z), accumulated with Kahan compensation
// alongside the convolution.
inline CumulativeField cumulative_kernel(std::int32_t t, std::int32_t cap = kDefaultConvolutionCap,
                                         int threads = 0) {
    if (t < 0) throw std::invalid_argument("cumulative_kernel: t must be >= 0");
    if (t > cap) {
        throw resource_error("cumulative_kernel: t = " + std::to_string(t) +
                             " exceeds convolution cap " + std::to_string(cap));
    }
    if (threads <= 0) threads = default_thread_count();
    const std::int32_t radius = t + 1;
    const std::size_t width = 2 * static_cast<std::size_t>(radius) + 1;
    const std::size_t cells = width * width;
    std::vector<double> cur(cells, 0.0), next(cells, 0.0);
    std::vector<double> acc(cells, 0.0), comp(cells, 0.0);
    const std::size_t origin = static_cast<std::size_t>(radius) * width + radius;
    cur[origin] = 1.0;
    acc[origin] = 1.0;
    for (std::int32_t u = 1; u <= t; ++u) {
        detail::convolve_step(cur, next, radius, u, threads);
        cur.swap(next);
        parallel_chunks(2 * static_cast<std::int64_t>(u) + 1, threads,
                        [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t row = lo; row < hi; ++row) {
                const std::int32_t b = static_cast<std::int32_t>(row) - u;
                std::size_t i = static_cast<std::size_t>(b + radius) * width +
                                static_cast<std::size_t>(radius - u);
                for (std::int32_t a = -u; a <= u; ++a, ++i) {
                    const double y = cur[i] - comp[i];
                    const double s = acc[i] + y;
                    comp[i] = (s - acc[i]) - y;
                    acc[i] = s;
                }
            }
        });
    }
    return CumulativeField(t, radius, std::move(acc));
}

// Local CLT density at distance r from the origin.
inline double lclt_density(std::int64_t t, double r) {
    if (t < 1) throw std::invalid_argument("lclt_density: t must be >= 1");
    if (r < 0) throw std::invalid_argument("lclt_density: r must be >= 0");
    return kSqrt3 / (2.0 * kPi * static_cast<double>(t)) * std::exp(-r * r / static_cast<double>(t));
}

// Everywhere-valid exponential envelope for pi_t.
inline double hoeffding_envelope(std::int64_t t, double r, double c) {
    if (t < 1) throw std::invalid_argument("hoeffding_envelope: t must be >= 1");
    if (c <= 0) throw std::invalid_argument("hoeffding_envelope: C must be > 0");
    return c * std::exp(-r * r / (2.0 * static_cast<double>(t)));
}

// True iff pi_t(z) <= C exp(-||z||^2 / 2t) for every site of the field.
inline bool validate_hoeffding(const WalkField& field, double c) {
    if (field.t() < 1) return true;
    bool ok = true;
    field.for_each_nonzero([&](SitePos z, double v) {
        if (v > hoeffding_envelope(field.t(), norm(z), c)) ok = false;
    });
    return ok;
}

// E1(x) = int_x^inf e^{-u}/u du for x > 0. Power series with the -gamma-ln x
// leading terms below 1, modified Lentz continued fraction above; relative
// accuracy ~1e-13 across the switch.
inline double exp_integral(double x) {
    if (!(x > 0)) throw std::invalid_argument("exp_integral: requires x > 0");
    if (x <= 1.0) {
        double term = 1.0, sum = 0.0;
        for (int k = 1; k < 64; ++k) {
            term *= -x / k;
            const double add = -term / k;
            sum += add;
            if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
        }
        return -kEulerGamma - std::log(x) + sum;
    }
    // e^{-x} * 1/(x+1- 1/(x+3- 4/(x+5- 9/(x+7- ...))))
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 200; ++k) {
        const double an = -static_cast<double>(k) * k;
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x);
}

// Decreasing bijection F(x) = E1(x) inverted by bisection.
inline double exp_integral_inverse(double y) {
    if (!(y > 0)) throw std::invalid_argument("exp_integral_inverse: requires y > 0");
    double lo = 1.0, hi = 1.0;
    while (exp_integral(lo) < y) lo *= 0.5;
    while (exp_integral(hi) > y) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (exp_integral(mid) > y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Continuum cumulative kernel sqrt(3)/(2 pi) * E1(r^2/t).
inline double rho_bar(std::int64_t t, double r) {
    if (t < 1) throw std::invalid_argument("rho_bar: t must be >= 1");
    if (!(r > 0)) throw std::invalid_argument("rho_bar: requires r > 0 (log divergence at 0)");
    return kSqrt3 / (2.0 * kPi) * exp_integral(r * r / static_cast<double>(t));
}

}  // namespace frontlab
