#pragma once

// Log-log least squares, the workhorse behind every exponent estimate.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace frontlab {

struct ScalingFit {
    std::vector<std::pair<double, double>> points;  // (x, y), x strictly increasing
    double slope = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 1.0;
};

// Ordinary least squares on (ln x, ln y).
inline ScalingFit fit_scaling(std::vector<std::pair<double, double>> points) {
    if (points.size() < 3) throw std::invalid_argument("fit_scaling: needs >= 3 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0)) {
            throw std::invalid_argument("fit_scaling: x and y must be positive");
        }
        if (i > 0 && !(points[i].first > points[i - 1].first)) {
            throw std::invalid_argument("fit_scaling: x must be strictly increasing");
        }
    }
    const auto k = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : points) {
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    ScalingFit fit;
    fit.slope = sxy / sxx;
    double ss_res = 0, ss_tot = 0;
    for (const auto& [x, y] : points) {
        const double dy = std::log(y) - my;
        const double e = dy - fit.slope * (std::log(x) - mx);
        ss_res += e * e;
        ss_tot += dy * dy;
    }
    fit.stderr_slope = points.size() > 2 ? std::sqrt(ss_res / (k - 2.0) / sxx) : 0.0;
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points = std::move(points);
    return fit;
}

// Exponents of the expected front length E[L] ~ sigma * sqrt(t) * sigma^{-alpha_2}
// with sigma ~ t^{2/7} and the two-arm exponent alpha_2 = 1/4; the three
// factors combine to t^{5/7}.
inline constexpr double kFluctuationExponent = 2.0 / 7.0;
inline constexpr double kTwoArmExponent = 0.25;
inline constexpr double kFrontLengthExponent =
    kFluctuationExponent + 0.5 - kTwoArmExponent * kFluctuationExponent;

inline double expected_length_decomposition(double t) {
    if (t < 1) throw std::invalid_argument("expected_length_decomposition: t >= 1");
    return std::pow(t, kFrontLengthExponent);
}

}  // namespace frontlab
