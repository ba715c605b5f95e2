#include "rhw/cli.hpp"

#include "rhw/black.hpp"
#include "rhw/calib.hpp"
#include "rhw/curve.hpp"
#include "rhw/error.hpp"
#include "rhw/hw.hpp"
#include "rhw/mixture.hpp"
#include "rhw/quadrature.hpp"
#include "rhw/rand_layer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace rhw::cli {

namespace {

using nlohmann::json;

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

/// temp + rename so readers never observe a partial file
void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw DomainError("cannot open output file: " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw DomainError("cannot rename " + tmp + " to " + path);
}

struct CommonOpts {
    std::string curve_path;
    double flat_rate = 0.03;
    std::string rand_json;
    std::string config_path;
    std::string out_path;
    double shift = 0.0;
    std::uint64_t seed = 42;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_rand = true) {
    cmd->add_option("--curve", o.curve_path, "curve CSV (tenor_years,zero_rate_cont_comp or discount_factor)");
    cmd->add_option("--flat-rate", o.flat_rate, "flat continuously-compounded rate (default 0.03)");
    if (with_rand) {
        cmd->add_option("--rand", o.rand_json, "randomizer spec JSON");
        cmd->add_option("--config", o.config_path, "JSON config file; flags override its values");
    }
    cmd->add_option("--out", o.out_path, "output file path");
    cmd->add_option("--shift", o.shift, "displacement for shifted-Black quoting (default 0)");
    cmd->add_option("--seed", o.seed, "RNG seed (default 42)");
}

YieldCurve make_curve(const CommonOpts& o) {
    if (!o.curve_path.empty()) return YieldCurve::from_csv(o.curve_path);
    return YieldCurve::flat(o.flat_rate);
}

json load_config(const CommonOpts& o) {
    json cfg = json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw DomainError("cannot open config file: " + o.config_path);
        try {
            cfg = json::parse(in);
        } catch (const json::exception& e) {
            throw DomainError(std::string("config JSON parse error: ") + e.what());
        }
    }
    if (!o.rand_json.empty()) {
        try {
            cfg.merge_patch(json::parse(o.rand_json)); // flags override file values
        } catch (const json::exception& e) {
            throw DomainError(std::string("--rand JSON parse error: ") + e.what());
        }
    }
    return cfg;
}

Randomizer randomizer_from(const json& j) {
    if (!j.contains("dist") || !j.contains("params"))
        throw DomainError("randomizer spec needs \"dist\" and \"params\"");
    Randomizer r;
    r.kind = dist_from_name(j.at("dist").get<std::string>());
    const auto p = j.at("params").get<std::vector<double>>();
    if (p.empty() || p.size() > 2) throw DomainError("randomizer \"params\" takes 1 or 2 values");
    r.a = p[0];
    r.b = p.size() > 1 ? p[1] : 0.0;
    r.validate();
    return r;
}

RandomizedSpec spec_from(const json& j) {
    const std::string target = j.value("target", "lambda");
    const int n = j.value("N", 5);
    if (target == "both") {
        BivariateNormal b;
        b.mu_eta = j.at("mu_eta").get<double>();
        b.sigma_eta = j.at("sigma_eta").get<double>();
        b.mu_lambda = j.at("mu_lambda").get<double>();
        b.sigma_lambda = j.at("sigma_lambda").get<double>();
        b.rho = j.value("rho", 0.0);
        b.validate();
        return RandomizedSpec::randomized_both(b, n, j.value("M", 5));
    }
    if (!j.contains("fixed"))
        throw DomainError("univariate randomizer spec needs \"fixed\" (the non-randomized parameter)");
    const auto r = randomizer_from(j);
    const double fixed = j.at("fixed").get<double>();
    if (target == "eta") return RandomizedSpec::randomized_eta(r, fixed, n);
    if (target == "lambda") return RandomizedSpec::randomized_lambda(r, fixed, n);
    throw DomainError("randomizer target must be eta, lambda or both");
}

SwaptionSpec swaption_from_flags(const YieldCurve& curve, double expiry, double tenor,
                                 double pay_step, std::optional<double> strike,
                                 double atm_offset, bool receiver) {
    auto s = SwaptionSpec::make(expiry, tenor, pay_step, 0.0, !receiver);
    if (strike) {
        s.strike = *strike;
    } else {
        s.strike = swap_rate_annuity(curve, s).forward + atm_offset;
    }
    s.validate();
    return s;
}

void emit(const CommonOpts& o, const std::string& content, const std::string& summary) {
    if (!o.out_path.empty()) {
        write_atomic(o.out_path, content);
        std::cout << summary << " -> " << o.out_path << "\n";
    } else {
        std::cout << content;
        if (!summary.empty()) std::cerr << summary << "\n";
    }
}

// ---- subcommand bodies -------------------------------------------------

int cmd_quadrature(const std::string& dist, const std::string& params_csv, int n,
                   const CommonOpts& o) {
    Randomizer r;
    r.kind = dist_from_name(dist);
    std::istringstream ps(params_csv);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ps, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.empty() || vals.size() > 2) throw DomainError("--params takes 1 or 2 comma-separated values");
    r.a = vals[0];
    r.b = vals.size() > 1 ? vals[1] : 0.0;

    const auto pairs = golub_welsch(r, n);
    std::ostringstream os;
    os << "weight,node\n";
    for (int i = 0; i < pairs.size(); ++i)
        os << num(pairs.weights[i]) << "," << num(pairs.nodes[i]) << "\n";
    emit(o, os.str(), "quadrature " + r.describe() + " n=" + std::to_string(n));
    return 0;
}

int cmd_price_zcb(double maturity, const CommonOpts& o) {
    const auto curve = make_curve(o);
    const auto spec = spec_from(load_config(o));
    const double price = rzcb(curve, spec, maturity);
    json out{{"command", "price-zcb"}, {"maturity", maturity}, {"price", price},
             {"curve_discount", curve.discount(maturity)}};
    emit(o, out.dump(2) + "\n", "price-zcb T=" + num(maturity) + " price=" + num(price));
    return 0;
}

int cmd_price_swaption(double expiry, double tenor, double pay_step, std::optional<double> strike,
                       double atm_offset, bool receiver, bool plain, double lambda, double eta,
                       const CommonOpts& o) {
    const auto curve = make_curve(o);
    const auto s = swaption_from_flags(curve, expiry, tenor, pay_step, strike, atm_offset, receiver);
    double price;
    json out{{"command", "price-swaption"}, {"expiry", expiry}, {"tenor", tenor},
             {"strike", s.strike}, {"payer", s.payer}};
    if (plain) {
        price = swaption_hw(curve, {lambda, eta}, s);
        out["mode"] = "hull-white";
    } else {
        price = rswaption(curve, spec_from(load_config(o)), s);
        out["mode"] = "randomized";
    }
    out["price"] = price;
    out["implied_vol"] = implied_vol(price, curve, s, o.shift);
    emit(o, out.dump(2) + "\n", "price-swaption price=" + num(price));
    return 0;
}

int cmd_surface(const std::vector<double>& expiries, double tenor, double pay_step,
                const std::vector<double>& strike_offsets, const CommonOpts& o) {
    const auto curve = make_curve(o);
    const auto cfg = load_config(o);
    std::ostringstream os;
    os << "expiry,tenor,strike,model_iv\n";
    for (double T : expiries) {
        for (double off : strike_offsets) {
            const auto s = swaption_from_flags(curve, T, tenor, pay_step, std::nullopt, off, false);
            SwaptionSpec payer = s;
            payer.payer = true;
            const double price = rswaption(curve, spec_from(cfg), payer);
            os << num(T) << "," << num(tenor) << "," << num(payer.strike) << ","
               << num(implied_vol(price, curve, payer, o.shift)) << "\n";
        }
    }
    emit(o, os.str(), "surface " + std::to_string(expiries.size()) + " expiries x " +
                          std::to_string(strike_offsets.size()) + " strikes");
    return 0;
}

int cmd_density(double t, int points, const CommonOpts& o) {
    const auto curve = make_curve(o);
    const auto spec = spec_from(load_config(o));
    const auto m = mixture_components(spec, curve, t);
    double lo = m.components.front().mean, hi = lo, sd = 0.0;
    for (const auto& cp : m.components) {
        lo = std::min(lo, cp.mean);
        hi = std::max(hi, cp.mean);
        sd = std::max(sd, cp.stdev);
    }
    lo -= 8.0 * sd;
    hi += 8.0 * sd;
    std::ostringstream os;
    os << "y,pdf\n";
    for (int i = 0; i < points; ++i) {
        const double y = lo + (hi - lo) * i / (points - 1);
        os << num(y) << "," << num(m.pdf(y)) << "\n";
    }
    emit(o, os.str(), "density t=" + num(t));
    return 0;
}

int cmd_simulate(double t, int steps_per_year, int paths, const CommonOpts& o) {
    const auto curve = make_curve(o);
    const auto spec = spec_from(load_config(o));
    const int steps = std::max(1, static_cast<int>(std::lround(steps_per_year * t)));
    const auto samples = simulate_local_vol(spec, curve, t, steps, paths, o.seed);
    const auto m = mixture_components(spec, curve, t);
    const auto stats = density_distance(samples, m);
    const bool pass = stats.ks <= ks_critical(paths, 0.01);
    json verdict{{"ks", stats.ks}, {"l1", stats.l1}, {"pass", pass},
                 {"ks_critical_1pct", ks_critical(paths, 0.01)}};
    if (!o.out_path.empty()) {
        std::ostringstream os;
        os << "terminal_rate\n";
        for (double x : samples) os << num(x) << "\n";
        write_atomic(o.out_path, os.str());
    }
    std::cout << verdict.dump(2) << "\n";
    return pass ? 0 : 2;
}

int cmd_convergence(const std::vector<int>& n_list, double expiry, double tenor, double pay_step,
                    double atm_offset, const CommonOpts& o) {
    if (n_list.size() < 2) throw DomainError("--n-list needs at least two sizes");
    const auto curve = make_curve(o);
    const auto cfg = load_config(o);
    const auto base = spec_from(cfg);
    const auto s = swaption_from_flags(curve, expiry, tenor, pay_step, std::nullopt, atm_offset, false);

    const int n_ref = *std::max_element(n_list.begin(), n_list.end());
    auto priced = [&](int n) {
        RandomizedSpec sp = base;
        sp.n = n;
        return rswaption(curve, sp, s);
    };
    const double ref = priced(n_ref);
    std::ostringstream os;
    os << "n,price,abs_err_vs_n" << n_ref << "\n";
    for (int n : n_list)
        os << n << "," << num(priced(n)) << "," << num(std::abs(priced(n) - ref)) << "\n";
    emit(o, os.str(), "convergence reference n=" + std::to_string(n_ref) + " price=" + num(ref));
    return 0;
}

int cmd_calibrate(const std::string& quotes_path, const std::string& scheme, int n, double pay_step,
                  const CommonOpts& o) {
    const auto curve = make_curve(o);
    const auto quotes = load_quotes_csv(quotes_path);
    CalibConfig cfg;
    cfg.scheme = scheme == "free" ? CalibScheme::FullyFree : CalibScheme::Table1;
    cfg.n = n;
    cfg.pay_step = pay_step;
    const auto results = calibrate(quotes, curve, cfg);
    json out = json::array();
    for (const auto& r : results) {
        json row{{"expiry", r.expiry},
                 {"eta", r.eta},
                 {"lambda_mean", r.lambda_mean},
                 {"lambda_sigma", r.lambda_sigma},
                 {"rmse", r.objective},
                 {"rmse_repriced_n20", r.objective_repriced},
                 {"iterations", r.iterations},
                 {"residuals", r.residuals}};
        out.push_back(row);
    }
    std::ostringstream sum;
    sum << "calibrated " << results.size() << " expiries;";
    for (const auto& r : results) sum << " T=" << r.expiry << " rmse=" << num(r.objective) << ";";
    emit(o, out.dump(2) + "\n", sum.str());
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"randomized Hull-White pricing and calibration"};
    app.require_subcommand(1);

    CommonOpts o;

    // quadrature
    std::string q_dist, q_params;
    int q_n = 5;
    auto* quad = app.add_subcommand("quadrature", "Gauss rule of a randomizer from its moments");
    quad->add_option("--dist", q_dist, "uniform|normal|exponential|gamma|chi2nc")->required();
    quad->add_option("--params", q_params, "comma-separated distribution parameters")->required();
    quad->add_option("--n", q_n, "number of quadrature pairs")->required();
    add_common(quad, o, false);

    // price-zcb
    double z_mat = 1.0;
    auto* zcb = app.add_subcommand("price-zcb", "randomized zero-coupon bond at t=0");
    zcb->add_option("--maturity", z_mat)->required();
    add_common(zcb, o);

    // price-swaption
    double sw_expiry = 1.0, sw_tenor = 1.0, sw_step = 0.25, sw_atm_off = 0.0;
    double sw_lambda = 0.01, sw_eta = 0.01;
    std::optional<double> sw_strike;
    bool sw_receiver = false, sw_plain = false;
    auto* swp = app.add_subcommand("price-swaption", "swaption under the randomized model");
    swp->add_option("--expiry", sw_expiry)->required();
    swp->add_option("--tenor", sw_tenor)->required();
    swp->add_option("--pay-step", sw_step, "fixed leg payment step in years (default 0.25)");
    swp->add_option("--strike", sw_strike, "absolute strike; defaults to ATM + --atm-offset");
    swp->add_option("--atm-offset", sw_atm_off);
    swp->add_flag("--receiver", sw_receiver, "price a receiver (default payer)");
    swp->add_flag("--plain-hw", sw_plain, "no randomization; use --lambda/--eta");
    swp->add_option("--lambda", sw_lambda);
    swp->add_option("--eta", sw_eta);
    add_common(swp, o);

    // surface
    std::vector<double> su_expiries, su_offsets;
    double su_tenor = 1.0, su_step = 0.25;
    auto* surf = app.add_subcommand("surface", "implied-vol surface CSV (expiry,tenor,strike,model_iv)");
    surf->add_option("--expiries", su_expiries)->required()->delimiter(',');
    surf->add_option("--tenor", su_tenor);
    surf->add_option("--pay-step", su_step);
    surf->add_option("--strike-offsets", su_offsets, "strike offsets from ATM")->required()->delimiter(',');
    add_common(surf, o);

    // density
    double d_t = 1.0;
    int d_points = 201;
    auto* dens = app.add_subcommand("density", "short-rate mixture density grid CSV (y,pdf)");
    dens->add_option("--t", d_t)->required();
    dens->add_option("--points", d_points);
    add_common(dens, o);

    // simulate
    double si_t = 1.0;
    int si_spy = 500, si_paths = 200000;
    auto* sim = app.add_subcommand("simulate",
                                   "Euler simulation of the mixture local-vol SDE + KS/L1 verdict");
    sim->add_option("--t", si_t)->required();
    sim->add_option("--steps-per-year", si_spy);
    sim->add_option("--paths", si_paths);
    add_common(sim, o);

    // convergence
    std::vector<int> co_nlist;
    double co_expiry = 1.0, co_tenor = 1.0, co_step = 0.25, co_atm_off = 0.0;
    auto* conv = app.add_subcommand("convergence", "price vs quadrature size CSV");
    conv->add_option("--n-list", co_nlist)->required()->delimiter(',');
    conv->add_option("--expiry", co_expiry);
    conv->add_option("--tenor", co_tenor);
    conv->add_option("--pay-step", co_step);
    conv->add_option("--atm-offset", co_atm_off);
    add_common(conv, o);

    // calibrate
    std::string ca_quotes, ca_scheme = "table1";
    int ca_n = 5;
    double ca_step = 0.25;
    auto* cal = app.add_subcommand("calibrate", "fit randomizer parameters to swaption quotes");
    cal->add_option("--quotes", ca_quotes, "CSV expiry,tenor,strike,market_iv,shift")->required();
    cal->add_option("--scheme", ca_scheme, "table1 (default) or free");
    cal->add_option("--n", ca_n, "quadrature size during the search (default 5)");
    cal->add_option("--pay-step", ca_step);
    add_common(cal, o);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        if (quad->parsed()) return cmd_quadrature(q_dist, q_params, q_n, o);
        if (zcb->parsed()) return cmd_price_zcb(z_mat, o);
        if (swp->parsed())
            return cmd_price_swaption(sw_expiry, sw_tenor, sw_step, sw_strike, sw_atm_off,
                                      sw_receiver, sw_plain, sw_lambda, sw_eta, o);
        if (surf->parsed()) return cmd_surface(su_expiries, su_tenor, su_step, su_offsets, o);
        if (dens->parsed()) return cmd_density(d_t, d_points, o);
        if (sim->parsed()) return cmd_simulate(si_t, si_spy, si_paths, o);
        if (conv->parsed()) return cmd_convergence(co_nlist, co_expiry, co_tenor, co_step, co_atm_off, o);
        if (cal->parsed()) return cmd_calibrate(ca_quotes, ca_scheme, ca_n, ca_step, o);
        return 1;
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
    } catch (const Error& e) {
        std::cerr << json{{"error", "domain"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}

} // namespace rhw::cli
