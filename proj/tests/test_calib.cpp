#include "rhw/black.hpp"
#include "rhw/calib.hpp"
#include "rhw/error.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace rhw;
using Catch::Approx;

namespace {

const YieldCurve flat3 = YieldCurve::flat(0.03);

// synthetic quotes from a known (eta, sigma) truth under the fixed-mean scheme
std::vector<Quote> synth_quotes(double expiry, double eta, double sigma, const CalibConfig& cfg) {
    const auto spec =
        RandomizedSpec::randomized_lambda(Randomizer::normal(cfg.lambda_mean, sigma), eta, cfg.n);
    std::vector<Quote> out;
    for (double off : {-0.015, -0.01, -0.005, 0.0, 0.005, 0.01, 0.015}) {
        auto s = SwaptionSpec::make(expiry, 1.0, cfg.pay_step, 0.0, true);
        s.strike = swap_rate_annuity(flat3, s).forward + off;
        const double iv = implied_vol(rswaption(flat3, spec, s), flat3, s, 0.01);
        out.push_back({expiry, 1.0, s.strike, iv, 0.01});
    }
    return out;
}

} // namespace

TEST_CASE("objective basics", "[calib]") {
    CalibConfig cfg;
    const auto quotes = synth_quotes(1.0, 0.0091, 0.45, cfg);
    CHECK(objective({0.0091, 0.45}, quotes, flat3, cfg) == Approx(0.0).margin(1e-10));
    CHECK(objective({0.0091 + 1e-3, 0.45}, quotes, flat3, cfg) > 1e-4);
    CHECK_THROWS_AS(objective({0.0091, 0.45}, {}, flat3, cfg), DomainError);

    // a nonsense region is penalized, not thrown
    CHECK(objective({-1.0, 0.45}, quotes, flat3, cfg) == 1e3);
}

TEST_CASE("objective is monotone in eta near the solution", "[calib]") {
    CalibConfig cfg;
    std::vector<Quote> atm = {synth_quotes(1.0, 0.0091, 0.45, cfg)[3]}; // ATM only
    double prev = objective({0.0091, 0.45}, atm, flat3, cfg);
    for (double d : {5e-4, 1e-3, 2e-3, 4e-3}) {
        const double up = objective({0.0091 + d, 0.45}, atm, flat3, cfg);
        CHECK(up > prev);
        prev = up;
    }
}

TEST_CASE("round-trip recovery of a synthetic market", "[calib][slow]") {
    CalibConfig cfg;
    const double eta_true = 0.0091, sigma_true = 0.45;
    const auto quotes = synth_quotes(1.0, eta_true, sigma_true, cfg);
    const auto results = calibrate(quotes, flat3, cfg);
    REQUIRE(results.size() == 1);
    const auto& r = results[0];
    CHECK(std::abs(r.eta - eta_true) <= 1e-3);
    CHECK(std::abs(r.lambda_sigma - sigma_true) <= 1e-2);
    CHECK(r.objective < 1e-6);
    CHECK(r.lambda_mean == cfg.lambda_mean);

    // result invariant: stored objective equals the recomputed RMSE
    double sse = 0.0;
    for (double x : r.residuals) sse += x * x;
    CHECK(r.objective == Approx(std::sqrt(sse / r.residuals.size())).margin(1e-14));
}

TEST_CASE("plain-model market drives sigma to its lower bound", "[calib][slow]") {
    CalibConfig cfg;
    const double eta_true = 0.0094, lam = 0.1;
    std::vector<Quote> quotes;
    for (double off : {-0.01, 0.0, 0.01}) {
        auto s = SwaptionSpec::make(1.0, 1.0, cfg.pay_step, 0.0, true);
        s.strike = swap_rate_annuity(flat3, s).forward + off;
        const double iv = implied_vol(swaption_hw(flat3, {lam, eta_true}, s), flat3, s, 0.01);
        quotes.push_back({1.0, 1.0, s.strike, iv, 0.01});
    }
    const auto r = calibrate(quotes, flat3, cfg).at(0);
    CHECK(r.lambda_sigma <= cfg.sigma_lo + 5e-3);
    CHECK(std::abs(r.eta - eta_true) <= 2e-4);
}

TEST_CASE("per-expiry independence and order invariance", "[calib][slow]") {
    CalibConfig cfg;
    auto q1 = synth_quotes(1.0, 0.0091, 0.45, cfg);
    auto q2 = synth_quotes(2.0, 0.0080, 0.33, cfg);

    std::vector<Quote> joined = q1;
    joined.insert(joined.end(), q2.begin(), q2.end());
    std::vector<Quote> reversed = q2;
    reversed.insert(reversed.end(), q1.begin(), q1.end());

    const auto ra = calibrate(joined, flat3, cfg);
    const auto rb = calibrate(reversed, flat3, cfg);
    const auto solo = calibrate(q1, flat3, cfg);
    REQUIRE(ra.size() == 2);
    REQUIRE(rb.size() == 2);
    CHECK(ra[0].expiry == 1.0);
    CHECK(ra[1].expiry == 2.0);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(ra[i].eta == rb[i].eta);
        CHECK(ra[i].lambda_sigma == rb[i].lambda_sigma);
    }
    CHECK(ra[0].eta == solo[0].eta);
}

TEST_CASE("quotes CSV loader", "[calib]") {
    const std::string path = "quotes_test_tmp.csv";
    {
        std::ofstream out(path);
        out << "expiry,tenor,strike,market_iv,shift\n"
            << "1.0,1.0,0.03,0.21,0.01\n"
            << "1.0,1.0,0.035,0.22,0.01\n";
    }
    const auto qs = load_quotes_csv(path);
    REQUIRE(qs.size() == 2);
    CHECK(qs[1].strike == 0.035);
    CHECK(qs[1].market_iv == 0.22);
    {
        std::ofstream out(path);
        out << "expiry,tenor,strike,market_iv,shift\n1.0,1.0,0.03,-0.21,0.01\n";
    }
    CHECK_THROWS_AS(load_quotes_csv(path), DomainError);
    {
        std::ofstream out(path);
        out << "foo,bar\n1,2\n";
    }
    CHECK_THROWS_AS(load_quotes_csv(path), DomainError);
    std::remove(path.c_str());
}
