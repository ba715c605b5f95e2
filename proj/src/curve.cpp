#include "rhw/curve.hpp"
#include "rhw/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rhw {

YieldCurve::YieldCurve(std::vector<Pillar> pillars, bool allow_extrapolation)
    : allow_extrapolation_(allow_extrapolation) {
    if (pillars.empty()) throw DomainError("yield curve needs at least one pillar");
    std::sort(pillars.begin(), pillars.end(), [](const Pillar& a, const Pillar& b) { return a.t < b.t; });
    pillars_.push_back({0.0, 1.0});
    for (const auto& p : pillars) {
        if (!(p.t > pillars_.back().t))
            throw DomainError("curve pillars must have strictly increasing tenors > 0");
        if (!(p.df > 0.0) || !std::isfinite(p.df))
            throw DomainError("curve discount factors must be positive");
        pillars_.push_back(p);
    }
}

YieldCurve YieldCurve::flat(double rate, double horizon) {
    return YieldCurve({{horizon, std::exp(-rate * horizon)}});
}

YieldCurve YieldCurve::from_csv(const std::string& path, bool allow_extrapolation) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open curve file: " + path);
    std::string header;
    std::getline(in, header);
    bool rates;
    if (header.find("zero_rate_cont_comp") != std::string::npos) rates = true;
    else if (header.find("discount_factor") != std::string::npos) rates = false;
    else throw DomainError("curve CSV header must name zero_rate_cont_comp or discount_factor");

    std::vector<Pillar> ps;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        double t, v;
        char comma;
        if (!(ls >> t >> comma >> v) || comma != ',')
            throw DomainError("malformed curve CSV at line " + std::to_string(lineno));
        ps.push_back({t, rates ? std::exp(-v * t) : v});
    }
    return YieldCurve(ps, allow_extrapolation);
}

double YieldCurve::log_df(double t) const {
    if (t < 0.0) throw DomainError("curve queried at negative time");
    const auto& ps = pillars_;
    if (t > ps.back().t) {
        if (!allow_extrapolation_)
            throw DomainError("curve queried beyond last pillar t=" + std::to_string(ps.back().t) +
                              " (flat-forward extrapolation not enabled)");
        // flat forward beyond the end
        const auto& a = ps[ps.size() - 2];
        const auto& b = ps.back();
        const double fwd = -(std::log(b.df) - std::log(a.df)) / (b.t - a.t);
        return std::log(b.df) - fwd * (t - b.t);
    }
    auto it = std::lower_bound(ps.begin(), ps.end(), t,
                               [](const Pillar& p, double x) { return p.t < x; });
    if (it->t == t) return std::log(it->df);
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return (1.0 - w) * std::log(lo.df) + w * std::log(hi.df);
}

double YieldCurve::discount(double t) const { return std::exp(log_df(t)); }

double YieldCurve::inst_forward(double t) const {
    const double h = 1e-5;
    if (t < 0.0) throw DomainError("curve queried at negative time");
    if (t < h) return -(log_df(t + h) - log_df(t)) / h;
    if (!allow_extrapolation_ && t + h > pillars_.back().t)
        return -(log_df(t) - log_df(t - h)) / h;
    return -(log_df(t + h) - log_df(t - h)) / (2.0 * h);
}

double YieldCurve::forward_slope(double) const { return 0.0; }

} // namespace rhw
