#pragma once

#include "rhw/curve.hpp"

#include <vector>

namespace rhw {

/// Hull-White parameters: dr = lambda (psi(t) - r) dt + eta dW, fitted to the
/// initial curve through the drift psi. lambda may be negative; all formulas
/// pass continuously through lambda = 0.
struct HWParams {
    double lambda = 0.01; // mean-reversion speed, 1/years
    double eta = 0.01;    // absolute short-rate volatility
};

/// European swaption: expiry T, fixed-leg payment times T_1 < ... < T_m with
/// T_1 > T, accruals tau_k = T_k - T_{k-1} (T_0 = T), fixed rate K.
struct SwaptionSpec {
    double expiry = 1.0;
    std::vector<double> pay_times;
    double strike = 0.0;
    bool payer = true;

    /// Regular schedule: payments every `step` years over `tenor` years.
    static SwaptionSpec make(double expiry, double tenor, double step, double strike, bool payer = true);

    std::vector<double> accruals() const;
    /// c_k = K tau_k for k < m, c_m = 1 + K tau_m.
    std::vector<double> coefficients() const;
    void validate() const;
};

/// B(T,S) = (1 - e^{-lambda (S-T)}) / lambda; the S-T limit at lambda = 0.
double b_fun(double lambda, double T, double S);

/// log-level A(T,S) of the bond reconstitution P(T,S) = exp(A - B r(T)):
/// A = log(P(0,S)/P(0,T)) + B f(0,T) - (eta^2/2) G(2 lambda, T) B^2
/// with G(a,t) = (1 - e^{-a t})/a.
double a_fun(const YieldCurve& c, const HWParams& p, double T, double S);

struct Moments {
    double mean;
    double variance;
};

/// Mean and variance of r(t) under the curve-fitted model:
/// mean = f(0,t) + (eta^2/2) G(lambda,t)^2, variance = eta^2 G(2 lambda, t).
Moments short_rate_moments(const YieldCurve& c, const HWParams& p, double t);

/// European option on P(T,S) struck at K, valued at t=0. chi=+1 call, -1 put.
/// Zero total volatility returns the discounted intrinsic value.
double zcb_option(const YieldCurve& c, const HWParams& p, double T, double S, double K, int chi);

/// Critical rate of the Jamshidian decomposition: the unique root of
/// 1 - sum_k c_k exp(A(T,T_k) - B(T,T_k) r) = 0. Safeguarded Newton with a
/// bisection fallback; residual below 1e-12 (typically machine precision).
double jamshidian_rstar(const YieldCurve& c, const HWParams& p, const SwaptionSpec& s);

/// Swaption price as a portfolio of ZCB options struck at
/// K_k = exp(A(T,T_k) - B(T,T_k) r*): puts for a payer, calls for a receiver.
double swaption_hw(const YieldCurve& c, const HWParams& p, const SwaptionSpec& s);

} // namespace rhw
