#pragma once

#include "rhw/curve.hpp"
#include "rhw/hw.hpp"

namespace rhw {

/// Forward swap rate and annuity implied by the curve for a swaption's schedule.
struct SwapRateQuote {
    double forward; // S(0)
    double annuity; // sum tau_k P(0, T_k)
};

SwapRateQuote swap_rate_annuity(const YieldCurve& c, const SwaptionSpec& s);

/// Undiscounted shifted-lognormal Black price. alpha=+1 call/payer, -1 put/receiver.
/// Requires F0+s > 0 and K+s > 0; zero total volatility returns the intrinsic.
double black_price(double T, double K, double F0, double sigma, int alpha, double shift);

/// Shifted Black swaption price: black_price times the annuity, with the
/// forward swap rate read off the curve.
double swaption_black(const YieldCurve& c, const SwaptionSpec& s, double sigma, double shift);

/// The unique sigma >= 0 reproducing `price` through swaption_black.
/// Bracketed bisection plus a Newton polish; |price error| <= 1e-12 * annuity.
/// Throws NumericalError when the price sits outside the no-arbitrage band,
/// reporting the band.
double implied_vol(double price, const YieldCurve& c, const SwaptionSpec& s, double shift);

} // namespace rhw
