#pragma once

// Analytic occupation profiles and their critical geometry.
//
// Fixed-n model: n walkers released at the origin at time 0. A site z is
// occupied with probability 1 - (1 - pi_t(z))^n; Poissonizing the particle
// count makes sites independent with p = 1 - exp(-n pi_t(z)), and the radial
// continuum profile is p_bar(r) = 1 - exp(-n pi_bar_t(r)).
//
// Source model: fresh Poisson(mu) arrivals at the origin every step, so
// counts are Poisson(mu rho_t(z)) and the profile is
// q_bar(r) = 1 - exp(-mu rho_bar_t(r)).
//
// The half-occupation radius r* of either profile is where the front of the
// particle cloud localizes. All radii here are real-valued; discretization
// to sites happens only in the sampling layer.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

#include "frontlab/walk_kernel.hpp"

namespace frontlab {

enum class ProfileMode { FixedN, Source };

struct ProfileParams {
    ProfileMode mode = ProfileMode::FixedN;
    double n = 0.0;   // particle count (fixed-n)
    double mu = 0.0;  // arrival rate per step (source)
    double t = 1.0;

    static ProfileParams fixed_n(double n, double t) {
        if (n < 1 || t < 1) throw std::invalid_argument("fixed_n: requires n >= 1, t >= 1");
        return {ProfileMode::FixedN, n, 0.0, t};
    }
    static ProfileParams source(double mu, double t) {
        if (mu <= 0 || t < 1) throw std::invalid_argument("source: requires mu > 0, t >= 1");
        return {ProfileMode::Source, 0.0, mu, t};
    }
};

// lambda_c = sqrt(3) / (2 pi log 2): the profile at the origin crosses 1/2
// exactly when t = lambda_c * n.
inline double lambda_critical() { return kSqrt3 / (2.0 * kPi * std::log(2.0)); }

// lambda_max = lambda_c / e: the time-per-particle ratio maximizing r*.
// t_max / t_c = 1/e independently of the lattice.
inline double lambda_max() { return lambda_critical() / std::exp(1.0); }

// Time stamp lambda*n as printed in snapshot grids (nearest integer).
inline std::int64_t stamp_time(double lambda, double n) {
    return static_cast<std::int64_t>(std::llround(lambda * n));
}

// Exact occupation probability 1 - (1 - pi_t(z))^n.
inline double exact_occupation_prob(double n, double pi_t_z) {
    if (n < 1) throw std::invalid_argument("exact_occupation_prob: n >= 1");
    return 1.0 - std::pow(1.0 - pi_t_z, n);
}

// Poissonized occupation probability 1 - exp(-n pi_t(z)).
inline double poisson_occupation_prob(double n, double pi_t_z) {
    if (n < 1) throw std::invalid_argument("poisson_occupation_prob: n >= 1");
    return -std::expm1(-n * pi_t_z);
}

// Radial Poissonian profile p_bar_{n,t}(r) = 1 - exp(-n pi_bar_t(r)).
inline double radial_profile(double n, double t, double r) {
    if (n < 1 || t < 1 || r < 0) throw std::invalid_argument("radial_profile: bad arguments");
    const double density = kSqrt3 / (2.0 * kPi * t) * std::exp(-r * r / t);
    return -std::expm1(-n * density);
}

// Source profile q_bar_{mu,t}(r) = 1 - exp(-mu rho_bar_t(r)); tends to 1 as
// r -> 0+ and to 0 as r -> infinity.
inline double source_profile(double mu, double t, double r) {
    if (mu <= 0 || t < 1 || !(r > 0)) throw std::invalid_argument("source_profile: bad arguments");
    const double rho = kSqrt3 / (2.0 * kPi) * exp_integral(r * r / t);
    return -std::expm1(-mu * rho);
}

inline double profile_value(const ProfileParams& p, double r) {
    return p.mode == ProfileMode::FixedN ? radial_profile(p.n, p.t, r)
                                         : source_profile(p.mu, p.t, r);
}

// r*_{n,t} = sqrt(t log(lambda_c n / t)); empty past the dislocation time so
// phase sweeps can cross the transition without exceptions.
inline std::optional<double> critical_radius(double n, double t) {
    if (n < 1 || t < 1) throw std::invalid_argument("critical_radius: requires n >= 1, t >= 1");
    const double ratio = lambda_critical() * n / t;
    if (ratio < 1.0) return std::nullopt;
    return std::sqrt(t * std::log(ratio));
}

// r*_{mu,t} = sqrt(F^{-1}(2 pi log 2 / (mu sqrt(3)))) * sqrt(t), F = E1.
inline double source_critical_radius(double mu, double t) {
    if (mu <= 0 || t < 1) throw std::invalid_argument("source_critical_radius: bad arguments");
    return std::sqrt(exp_integral_inverse(2.0 * kPi * std::log(2.0) / (mu * kSqrt3))) *
           std::sqrt(t);
}

// Inverse of a strictly decreasing profile by bisection, to 1e-6 lattice
// units in r (and ~1e-9 or better in profile value near the front).
inline double profile_inverse(const ProfileParams& p, double target) {
    const double at_zero = p.mode == ProfileMode::FixedN ? radial_profile(p.n, p.t, 0.0) : 1.0;
    if (!(target > 0.0) || !(target < at_zero)) {
        throw std::invalid_argument("profile_inverse: target outside attainable range (0, " +
                                    std::to_string(at_zero) + ")");
    }
    double lo = p.mode == ProfileMode::FixedN ? 0.0 : 1e-12;
    double hi = std::sqrt(p.t);
    while (profile_value(p, hi) > target) hi *= 2.0;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (profile_value(p, mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Characteristic-length model L(p); the default is the near-critical power
// law |p - 1/2|^{-4/3}. An empirical table from the percolation module can
// be plugged in instead.
using CharLengthModel = std::function<double(double)>;

inline CharLengthModel power_law_char_length() {
    return [](double p) {
        const double d = std::fabs(p - 0.5);
        if (d <= 0.0) return std::numeric_limits<double>::infinity();
        return std::pow(d, -4.0 / 3.0);
    };
}

struct SigmaPair {
    double outward = 0.0;  // sigma+
    double inward = 0.0;   // sigma-
};

// Fluctuation scales sigma± = sup{ sigma : L(p(floor(r*) ± sigma)) >= sigma }.
// With the power-law model and the profile slope ~ 1/sqrt(t) near r*, both
// scale as t^{2/7}.
inline SigmaPair sigma_fluctuation(const ProfileParams& p, const CharLengthModel& length_model) {
    double r_star;
    if (p.mode == ProfileMode::FixedN) {
        auto r = critical_radius(p.n, p.t);
        if (!r) throw std::invalid_argument("sigma_fluctuation: r* undefined (dilute side)");
        r_star = *r;
    } else {
        r_star = source_critical_radius(p.mu, p.t);
    }
    const double base = std::floor(r_star);
    auto solve = [&](double sign) {
        auto holds = [&](double sigma) {
            double r = base + sign * sigma;
            if (r <= 0.0) r = 1e-12;  // profile is capped at the origin
            return length_model(profile_value(p, r)) >= sigma;
        };
        if (!holds(1e-9)) return 0.0;
        double lo = 1e-9, hi = 1.0;
        while (holds(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e9) return lo;  // model never pins the scale down
        }
        for (int i = 0; i < 100; ++i) {
            const double mid = 0.5 * (lo + hi);
            (holds(mid) ? lo : hi) = mid;
        }
        return lo;
    };
    return {solve(+1.0), solve(-1.0)};
}

// Everything the harness reports about a parameter point, serialized with
// full precision by the io layer.
struct CriticalSummary {
    double lambda_c = 0.0;
    double lambda_max = 0.0;
    double r_star = 0.0;
    double r_minus = 0.0;
    double r_plus = 0.0;
    double sigma_pred = 0.0;
};

// delta = 0.1 keeps r± well inside desk-scale grids; the analysis only needs
// some delta > 0 with p_bar(0) >= 1/2 + 2 delta.
inline constexpr double kProfileDelta = 0.1;

inline CriticalSummary critical_summary(const ProfileParams& p) {
    CriticalSummary s;
    s.lambda_c = lambda_critical();
    s.lambda_max = lambda_max();
    if (p.mode == ProfileMode::FixedN) {
        auto r = critical_radius(p.n, p.t);
        s.r_star = r ? *r : std::numeric_limits<double>::quiet_NaN();
        if (r) {
            s.r_minus = profile_inverse(p, 0.5 + kProfileDelta);
            s.r_plus = profile_inverse(p, 0.5 - kProfileDelta);
        }
    } else {
        // Source-mode quartile radii, r- at 3/4 and r+ at 1/4.
        s.r_star = source_critical_radius(p.mu, p.t);
        s.r_minus = profile_inverse(p, 0.75);
        s.r_plus = profile_inverse(p, 0.25);
    }
    if (std::isfinite(s.r_star)) {
        s.sigma_pred = sigma_fluctuation(p, power_law_char_length()).outward;
    }
    return s;
}

}  // namespace frontlab
