#include "rhw/black.hpp"
#include "rhw/error.hpp"
#include "rhw/math.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rhw {

SwapRateQuote swap_rate_annuity(const YieldCurve& c, const SwaptionSpec& s) {
    const auto tau = s.accruals();
    double ann = 0.0;
    for (size_t k = 0; k < tau.size(); ++k) ann += tau[k] * c.discount(s.pay_times[k]);
    const double fwd = (c.discount(s.expiry) - c.discount(s.pay_times.back())) / ann;
    return {fwd, ann};
}

double black_price(double T, double K, double F0, double sigma, int alpha, double shift) {
    if (!(T > 0.0)) throw DomainError("black_price requires T > 0");
    if (!(F0 + shift > 0.0 && K + shift > 0.0))
        throw DomainError("black_price requires shifted forward and strike to be positive");
    if (sigma < 0.0) throw DomainError("black_price requires sigma >= 0");
    const double st = sigma * std::sqrt(T);
    if (st == 0.0) return std::max(alpha * (F0 - K), 0.0);
    const double d1 = (std::log((F0 + shift) / (K + shift)) + 0.5 * sigma * sigma * T) / st;
    const double d2 = d1 - st;
    return alpha * (F0 + shift) * norm_cdf(alpha * d1) - alpha * (K + shift) * norm_cdf(alpha * d2);
}

double swaption_black(const YieldCurve& c, const SwaptionSpec& s, double sigma, double shift) {
    const auto q = swap_rate_annuity(c, s);
    return q.annuity * black_price(s.expiry, s.strike, q.forward, sigma, s.payer ? +1 : -1, shift);
}

double implied_vol(double price, const YieldCurve& c, const SwaptionSpec& s, double shift) {
    const auto q = swap_rate_annuity(c, s);
    const int alpha = s.payer ? +1 : -1;
    const double intrinsic = q.annuity * std::max(alpha * (q.forward - s.strike), 0.0);
    const double upper =
        q.annuity * (alpha > 0 ? q.forward + shift : s.strike + shift); // sigma -> infinity limit
    const double tol = 1e-12 * q.annuity;
    if (price < intrinsic - tol || price > upper + tol) {
        std::ostringstream os;
        os << "price " << price << " outside the arbitrage band [" << intrinsic << ", " << upper << "]";
        throw NumericalError(os.str());
    }
    if (price <= intrinsic + tol) return 0.0;

    auto f = [&](double sig) { return swaption_black(c, s, sig, shift) - price; };

    double lo = 0.0, hi = 1.0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e4) throw NumericalError("implied vol bracket exploded");
    }
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) lo = mid; else hi = mid;
        if (hi - lo < 1e-12) break;
    }
    double sig = 0.5 * (lo + hi);
    // Newton polish with the Black vega
    const double sqT = std::sqrt(s.expiry);
    for (int it = 0; it < 8; ++it) {
        const double err = f(sig);
        if (std::abs(err) <= tol) break;
        const double d1 = (std::log((q.forward + shift) / (s.strike + shift)) +
                           0.5 * sig * sig * s.expiry) / (sig * sqT);
        const double vega = q.annuity * (q.forward + shift) * norm_pdf(d1) * sqT;
        if (vega <= 0.0) break;
        const double next = sig - err / vega;
        if (next <= 0.0) break;
        sig = next;
    }
    return sig;
}

} // namespace rhw
