#pragma once

#include <cmath>

namespace parmax {

// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Inverse standard normal CDF (Wichura's AS241 / PPND16). Accurate to about
// 1e-15 over (0, 1); used both for quantile algebra and for inverse-transform
// normal sampling so that draw sequences are identical across platforms.
double probit(double p);

// z-score of the 0.95 quantile as used throughout the latency calibration.
// Kept at four decimals so fitted parameters are stable and reproducible.
inline constexpr double kZ95 = 1.6449;

}  // namespace parmax
