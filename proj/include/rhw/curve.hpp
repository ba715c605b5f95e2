#pragma once

#include <string>
#include <vector>

namespace rhw {

/// Initial yield curve: discount factors P(0,t) with log-linear interpolation
/// in log-discount, i.e. piecewise-constant instantaneous forwards between
/// pillars. Immutable after construction.
class YieldCurve {
public:
    struct Pillar {
        double t;  // years, strictly increasing, > 0
        double df; // discount factor, > 0
    };

    /// Pillars must have strictly increasing t > 0 and positive discounts.
    /// An implicit (0, 1) pillar anchors the short end.
    explicit YieldCurve(std::vector<Pillar> pillars, bool allow_extrapolation = false);

    static YieldCurve flat(double rate, double horizon = 100.0);

    /// CSV with header `tenor_years,zero_rate_cont_comp` or
    /// `tenor_years,discount_factor`; the header decides the second column.
    static YieldCurve from_csv(const std::string& path, bool allow_extrapolation = false);

    /// P(0,t). Exact at pillars; log-linear in between. Throws DomainError
    /// beyond the last pillar unless flat-forward extrapolation was enabled.
    double discount(double t) const;

    /// f(0,t) = -d log P(0,t)/dt by central finite difference with step 1e-5y
    /// (one-sided at the ends).
    double inst_forward(double t) const;

    /// In-segment slope of the instantaneous forward. Identically zero for the
    /// log-linear scheme; kept as curve API so drift formulas stay
    /// representation-agnostic.
    double forward_slope(double t) const;

    double last_tenor() const { return pillars_.back().t; }
    const std::vector<Pillar>& pillars() const { return pillars_; }

private:
    std::vector<Pillar> pillars_; // includes the (0, 1) anchor
    bool allow_extrapolation_;

    double log_df(double t) const;
};

} // namespace rhw
