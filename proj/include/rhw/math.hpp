#pragma once

#include <cmath>

namespace rhw {

inline constexpr double pi = 3.14159265358979323846;

/// Standard normal CDF via erfc (relative error at the few-ulp level, also in the tails).
inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
}

/// (1 - e^{-a t}) / a, continuous through a = 0 where it equals t.
/// Nonnegative for every real a and t >= 0. Backbone of all small-lambda limits.
inline double expm1_ratio(double a, double t) {
    if (a == 0.0) return t;
    return -std::expm1(-a * t) / a;
}

} // namespace rhw
