#pragma once

// Frozen empirical constants. Asymptotic statements fix exponents but leave
// multiplicative constants open; the values below were measured once with
// tools/calibrate and are treated as part of the contract from then on
// (validators fail loudly if a kernel ever violates them). The shipped
// configs/calibrated.toml mirrors this header for runtime overrides.

namespace frontlab::calibration {

// pi_t(z) <= kHoeffdingC * exp(-||z||^2/2t), validated for all t <= 256.
inline constexpr double kHoeffdingC = 1.0;

// max over ||z|| <= t^{9/16} of |pi_t(z)/pi_bar_t(||z||) - 1| <= kLcltC * t^{-3/4},
// checked at t = 400; the statistic is decreasing over t in {100,...,800}.
inline constexpr double kLcltC = 1.1;

// |rho_t(z) - rho_bar_t(||z||)| <= kRhoBarC * t^{-9/16} over t^{7/16} <= ||z|| <= t^{9/16},
// checked at t = 1024.
inline constexpr double kRhoBarC = 1.1;

// min over ||z|| <= t^{1/2 - 0.1} of rho_t(z) >= kRhoLogC1 * log t - kRhoLogC2,
// with kRhoLogC1 = (sqrt(3)/(2 pi)) * e^{-1} * 0.2 fixed analytically.
inline constexpr double kRhoLogC1 = 0.020282450434560086;
inline constexpr double kRhoLogC2 = 0.0;

// Dilute-phase verdict threshold: max cluster diameter <= kDiluteC * log n.
inline constexpr double kDiluteC = 20.0;

// Radial profile slope bracket on [r-, r+]:
//   -kSlopeC1 * (log t)^{1/(2 alpha)} / sqrt(t) <= dp/dr <= -kSlopeC2 / sqrt(t).
inline constexpr double kSlopeC1 = 2.0;
inline constexpr double kSlopeC2 = 0.05;

}  // namespace frontlab::calibration
