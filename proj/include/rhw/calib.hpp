#pragma once

#include "rhw/curve.hpp"
#include "rhw/rand_layer.hpp"

#include <string>
#include <vector>

namespace rhw {

/// One swaption implied-vol quote.
struct Quote {
    double expiry;
    double tenor;
    double strike;
    double market_iv;
    double shift;
};

/// CSV with header `expiry,tenor,strike,market_iv,shift`.
std::vector<Quote> load_quotes_csv(const std::string& path);

enum class CalibScheme {
    Table1,   // eta free, lambda ~ N(mu fixed, sigma^2) with sigma free (default)
    FullyFree // eta, mu_lambda and sigma_lambda all free
};

struct CalibConfig {
    CalibScheme scheme = CalibScheme::Table1;
    double lambda_mean = 0.1; // fixed randomizer mean under the Table1 scheme
    int n = 5;                // quadrature size during the search
    int reprice_n = 20;       // final fit re-priced at this size
    double pay_step = 0.25;   // fixed-leg payment frequency of the quoted swaps
    // search box
    double eta_lo = 2e-4, eta_hi = 0.05;
    double sigma_lo = 1e-3, sigma_hi = 1.0;
    double mu_lo = -0.5, mu_hi = 1.0; // FullyFree only
};

struct CalibrationResult {
    double expiry = 0.0;
    double eta = 0.0;
    double lambda_mean = 0.0;
    double lambda_sigma = 0.0;
    double objective = 0.0; // RMSE of IV residuals at quadrature size n
    double objective_repriced = 0.0; // same fit re-priced at reprice_n
    int iterations = 0;
    std::vector<double> residuals; // model_iv - market_iv, quote order
};

/// RMSE in implied-vol space of a parameter vector against one expiry's
/// quotes. params = {eta, sigma} (Table1) or {eta, mu, sigma} (FullyFree).
/// Pricing failures inside the search region return the penalty value 1e3.
double objective(const std::vector<double>& params, const std::vector<Quote>& quotes,
                 const YieldCurve& c, const CalibConfig& cfg);

/// Calibrate each expiry's quote strip independently: bounded Nelder-Mead from
/// a deterministic 3x3 multi-start grid over the search box. Throws
/// CalibrationError when every start ends penalized.
std::vector<CalibrationResult> calibrate(const std::vector<Quote>& quotes, const YieldCurve& c,
                                         const CalibConfig& cfg);

} // namespace rhw
