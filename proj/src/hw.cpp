#include "rhw/hw.hpp"
#include "rhw/error.hpp"
#include "rhw/math.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rhw {

SwaptionSpec SwaptionSpec::make(double expiry, double tenor, double step, double strike, bool payer) {
    SwaptionSpec s;
    s.expiry = expiry;
    s.strike = strike;
    s.payer = payer;
    const int n = static_cast<int>(std::lround(tenor / step));
    for (int i = 1; i <= n; ++i) s.pay_times.push_back(expiry + i * step);
    return s; // validated at pricing time, so the strike can still be set to ATM

}

void SwaptionSpec::validate() const {
    if (pay_times.empty()) throw DomainError("swaption needs at least one payment time");
    double prev = expiry;
    for (double t : pay_times) {
        if (!(t > prev)) throw DomainError("swaption payment times must be strictly increasing past expiry");
        prev = t;
    }
    for (double c : coefficients())
        if (!(c > 0.0)) throw DomainError("swaption coefficients must be positive (strike too negative)");
}

std::vector<double> SwaptionSpec::accruals() const {
    std::vector<double> tau(pay_times.size());
    double prev = expiry;
    for (size_t k = 0; k < pay_times.size(); ++k) {
        tau[k] = pay_times[k] - prev;
        prev = pay_times[k];
    }
    return tau;
}

std::vector<double> SwaptionSpec::coefficients() const {
    auto c = accruals();
    for (auto& x : c) x *= strike;
    c.back() += 1.0;
    return c;
}

double b_fun(double lambda, double T, double S) {
    return expm1_ratio(lambda, S - T);
}

double a_fun(const YieldCurve& c, const HWParams& p, double T, double S) {
    const double B = b_fun(p.lambda, T, S);
    return std::log(c.discount(S) / c.discount(T)) + B * c.inst_forward(T) -
           0.5 * p.eta * p.eta * expm1_ratio(2.0 * p.lambda, T) * B * B;
}

Moments short_rate_moments(const YieldCurve& c, const HWParams& p, double t) {
    const double g = expm1_ratio(p.lambda, t);
    return {c.inst_forward(t) + 0.5 * p.eta * p.eta * g * g,
            p.eta * p.eta * expm1_ratio(2.0 * p.lambda, t)};
}

double zcb_option(const YieldCurve& c, const HWParams& p, double T, double S, double K, int chi) {
    if (!(T > 0.0 && S > T)) throw DomainError("zcb_option requires 0 < T < S");
    if (!(K > 0.0)) throw DomainError("zcb_option requires K > 0");
    const double PS = c.discount(S);
    const double PT = c.discount(T);
    const double B = b_fun(p.lambda, T, S);
    const double sig = std::sqrt(std::max(p.eta * p.eta * expm1_ratio(2.0 * p.lambda, T), 0.0)) * B;
    if (sig < 1e-12) return std::max(chi * (PS - K * PT), 0.0);
    const double d = std::log(PS / (PT * K)) / sig + 0.5 * sig;
    return chi * PS * norm_cdf(chi * d) - chi * K * PT * norm_cdf(chi * (d - sig));
}

double jamshidian_rstar(const YieldCurve& c, const HWParams& p, const SwaptionSpec& s) {
    s.validate();
    const double T = s.expiry;
    const auto coef = s.coefficients();
    const size_t m = coef.size();
    std::vector<double> A(m), B(m);
    for (size_t k = 0; k < m; ++k) {
        A[k] = a_fun(c, p, T, s.pay_times[k]);
        B[k] = b_fun(p.lambda, T, s.pay_times[k]);
    }
    // g(r) = 1 - sum c_k exp(A_k - B_k r), strictly increasing in r since all
    // B_k > 0 and c_k > 0.
    auto g = [&](double r) {
        double acc = 0.0;
        for (size_t k = 0; k < m; ++k) acc += coef[k] * std::exp(A[k] - B[k] * r);
        return 1.0 - acc;
    };
    auto gp = [&](double r) {
        double acc = 0.0;
        for (size_t k = 0; k < m; ++k) acc += coef[k] * B[k] * std::exp(A[k] - B[k] * r);
        return acc;
    };

    double lo = -5.0, hi = 5.0;
    double glo = g(lo), ghi = g(hi);
    if (!std::isfinite(glo) || !std::isfinite(ghi) || glo > 0.0 || ghi < 0.0) {
        std::ostringstream os;
        os << "jamshidian root not bracketable in [-5, 5]: g(-5)=" << glo << " g(5)=" << ghi
           << " lambda=" << p.lambda << " eta=" << p.eta << " T=" << T;
        throw NumericalError(os.str());
    }

    double r = std::clamp(c.inst_forward(T), lo, hi);
    double gr = g(r);
    for (int it = 0; it < 100; ++it) {
        if (std::abs(gr) < 1e-14) return r;
        if (gr < 0.0) lo = r; else hi = r;
        const double dg = gp(r);
        double next = dg > 0.0 ? r - gr / dg : std::numeric_limits<double>::quiet_NaN();
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        r = next;
        gr = g(r);
    }
    if (std::abs(gr) < 1e-12) return r;
    throw NumericalError("jamshidian Newton stalled, residual " + std::to_string(gr));
}

double swaption_hw(const YieldCurve& c, const HWParams& p, const SwaptionSpec& s) {
    const double rstar = jamshidian_rstar(c, p, s);
    const auto coef = s.coefficients();
    const int chi = s.payer ? -1 : +1;
    double price = 0.0;
    for (size_t k = 0; k < coef.size(); ++k) {
        const double Tk = s.pay_times[k];
        const double Khat =
            std::exp(a_fun(c, p, s.expiry, Tk) - b_fun(p.lambda, s.expiry, Tk) * rstar);
        price += coef[k] * zcb_option(c, p, s.expiry, Tk, Khat, chi);
    }
    return price;
}

} // namespace rhw
