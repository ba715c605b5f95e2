#include "rhw/calib.hpp"
#include "rhw/black.hpp"
#include "rhw/error.hpp"
#include "rhw/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rhw {

namespace {

constexpr double penalty = 1e3;

RandomizedSpec spec_of(const std::vector<double>& params, const CalibConfig& cfg) {
    const double eta = params[0];
    const double mu = cfg.scheme == CalibScheme::Table1 ? cfg.lambda_mean : params[1];
    const double sigma = cfg.scheme == CalibScheme::Table1 ? params[1] : params[2];
    return RandomizedSpec::randomized_lambda(Randomizer::normal(mu, sigma), eta, cfg.n);
}

std::vector<double> residuals_at(const RandomizedSpec& spec, const std::vector<Quote>& quotes,
                                 const YieldCurve& c, const CalibConfig& cfg) {
    std::vector<double> res;
    res.reserve(quotes.size());
    for (const auto& q : quotes) {
        const auto s = SwaptionSpec::make(q.expiry, q.tenor, cfg.pay_step, q.strike);
        const double price = rswaption(c, spec, s);
        res.push_back(implied_vol(price, c, s, q.shift) - q.market_iv);
    }
    return res;
}

double rmse(const std::vector<double>& r) {
    double s = 0.0;
    for (double x : r) s += x * x;
    return std::sqrt(s / r.size());
}

} // namespace

std::vector<Quote> load_quotes_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open quotes file: " + path);
    std::string header;
    std::getline(in, header);
    if (header.find("expiry") == std::string::npos || header.find("market_iv") == std::string::npos)
        throw DomainError("quotes CSV must have header expiry,tenor,strike,market_iv,shift");
    std::vector<Quote> out;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        Quote q;
        char c1, c2, c3, c4;
        if (!(ls >> q.expiry >> c1 >> q.tenor >> c2 >> q.strike >> c3 >> q.market_iv >> c4 >> q.shift))
            throw DomainError("malformed quotes CSV at line " + std::to_string(lineno));
        if (!(q.market_iv > 0.0))
            throw DomainError("quote at line " + std::to_string(lineno) + " has non-positive IV");
        out.push_back(q);
    }
    return out;
}

double objective(const std::vector<double>& params, const std::vector<Quote>& quotes,
                 const YieldCurve& c, const CalibConfig& cfg) {
    if (quotes.empty()) throw DomainError("objective requires a non-empty quote set");
    try {
        const double v = rmse(residuals_at(spec_of(params, cfg), quotes, c, cfg));
        return std::isfinite(v) ? v : penalty;
    } catch (const Error&) {
        return penalty;
    }
}

std::vector<CalibrationResult> calibrate(const std::vector<Quote>& quotes, const YieldCurve& c,
                                         const CalibConfig& cfg) {
    if (quotes.empty()) throw DomainError("calibrate requires a non-empty quote set");

    std::map<double, std::vector<Quote>> by_expiry;
    for (const auto& q : quotes) by_expiry[q.expiry].push_back(q);

    std::vector<double> lo{cfg.eta_lo}, hi{cfg.eta_hi};
    if (cfg.scheme == CalibScheme::FullyFree) { lo.push_back(cfg.mu_lo); hi.push_back(cfg.mu_hi); }
    lo.push_back(cfg.sigma_lo);
    hi.push_back(cfg.sigma_hi);

    std::vector<CalibrationResult> out;
    for (auto& [expiry, strip] : by_expiry) {
        auto f = [&](const std::vector<double>& p) { return objective(p, strip, c, cfg); };

        SimplexResult best;
        best.value = std::numeric_limits<double>::infinity();
        int total_iters = 0;
        for (int ie = 0; ie < 3; ++ie) {
            for (int is = 0; is < 3; ++is) {
                std::vector<double> x0(lo.size());
                const double fe = 0.25 * (ie + 1), fsg = 0.25 * (is + 1);
                x0[0] = cfg.eta_lo + fe * (cfg.eta_hi - cfg.eta_lo);
                x0.back() = cfg.sigma_lo + fsg * (cfg.sigma_hi - cfg.sigma_lo);
                if (cfg.scheme == CalibScheme::FullyFree)
                    x0[1] = cfg.mu_lo + 0.5 * (cfg.mu_hi - cfg.mu_lo);
                auto r = nelder_mead(f, x0, lo, hi);
                total_iters += r.iterations;
                if (r.value < best.value) best = std::move(r);
            }
        }
        if (best.value >= penalty)
            throw CalibrationError("all starts penalized for expiry " + std::to_string(expiry) +
                                   "; best objective " + std::to_string(best.value));

        CalibrationResult res;
        res.expiry = expiry;
        res.eta = best.x[0];
        res.lambda_mean = cfg.scheme == CalibScheme::Table1 ? cfg.lambda_mean : best.x[1];
        res.lambda_sigma = best.x.back();
        res.iterations = total_iters;
        res.residuals = residuals_at(spec_of(best.x, cfg), strip, c, cfg);
        res.objective = rmse(res.residuals);

        CalibConfig fine = cfg;
        fine.n = cfg.reprice_n;
        res.objective_repriced = rmse(residuals_at(spec_of(best.x, fine), strip, c, fine));
        out.push_back(std::move(res));
    }
    return out;
}

} // namespace rhw
