#pragma once

#include "rhw/black.hpp"
#include "rhw/curve.hpp"
#include "rhw/hw.hpp"
#include "rhw/quadrature.hpp"

#include <functional>
#include <vector>

namespace rhw {

enum class RandomTarget { Eta, Lambda, Both };

/// Correlated pair (eta, lambda) ~ bivariate normal. The conditional law
/// lambda | eta = e is N(mu_l + (sl/se) rho (e - mu_e), (1 - rho^2) sl^2).
struct BivariateNormal {
    double mu_eta, sigma_eta;
    double mu_lambda, sigma_lambda;
    double rho;

    void validate() const;
    Randomizer eta_marginal() const { return Randomizer::normal(mu_eta, sigma_eta); }
    Randomizer lambda_conditional(double eta_node) const;
};

/// Which model parameter is randomized, by what, and at which quadrature size.
/// For Both the outer rule (size n) discretizes eta and the inner rules
/// (size m, one per eta node) the conditional lambda.
struct RandomizedSpec {
    RandomTarget target = RandomTarget::Lambda;
    double fixed = 0.0; // the non-randomized coordinate (unused for Both)
    Randomizer dist;    // univariate randomizer (unused for Both)
    BivariateNormal biv{};
    int n = 5;
    int m = 5;

    static RandomizedSpec randomized_eta(const Randomizer& r, double fixed_lambda, int n);
    static RandomizedSpec randomized_lambda(const Randomizer& r, double fixed_eta, int n);
    static RandomizedSpec randomized_both(const BivariateNormal& b, int n, int m);

    /// HW parameters at a realization of the randomized coordinate.
    HWParams params_at(double theta) const;
};

/// Outer/inner rule for a bivariate randomizer: outer pairs for eta, and for
/// each eta node the pairs of the conditional lambda law.
struct BivariatePairs {
    QuadraturePairs outer;                    // (w_n, eta_n)
    std::vector<QuadraturePairs> conditional; // per outer node: (w_{m,n}, lambda_{m,n})
};

/// Quadrature pairs of a univariate spec. Enforces positivity of eta nodes
/// when eta is randomized (throws ConfigError naming the offending node).
QuadraturePairs pairs_for(const RandomizedSpec& spec);

BivariatePairs bivariate_pairs(const BivariateNormal& b, int n, int m);

/// The randomization layer itself: price = sum of weighted constituent prices
/// over the parameter realizations. Generic over the payoff.
double randomized_price(const std::function<double(const HWParams&)>& pricer,
                        const RandomizedSpec& spec);

/// Randomized zero-coupon bond at t=0 (equals the curve discount by the fit).
double rzcb(const YieldCurve& c, const RandomizedSpec& spec, double maturity);

/// Randomized swaption: one Jamshidian decomposition per parameter node.
double rswaption(const YieldCurve& c, const RandomizedSpec& spec, const SwaptionSpec& s);

double rswaption_bivariate(const YieldCurve& c, const BivariateNormal& b, int n, int m,
                           const SwaptionSpec& s);

/// Which scalar of a RandomizedSpec a sensitivity is taken against.
enum class BumpTarget { RandParamA, RandParamB, Fixed };

struct Sensitivity {
    double derivative;
    bool one_sided; // true when one bump direction left the parameter domain
};

/// Central finite difference of a randomized price with respect to a
/// randomizer parameter or the fixed coordinate, rebuilding the quadrature
/// pairs per bump. Falls back to a one-sided difference when a bump direction
/// is invalid.
Sensitivity sensitivity_fd(const std::function<double(const RandomizedSpec&)>& price,
                           const RandomizedSpec& spec, BumpTarget which, double delta);

} // namespace rhw
