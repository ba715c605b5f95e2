#include "rhw/rand_layer.hpp"
#include "rhw/error.hpp"

#include <cmath>
#include <sstream>

namespace rhw {

void BivariateNormal::validate() const {
    if (!(sigma_eta > 0.0) || !(sigma_lambda > 0.0))
        throw DomainError("bivariate normal requires positive marginal stdevs");
    if (!(std::abs(rho) < 1.0)) throw DomainError("bivariate normal requires |rho| < 1");
}

Randomizer BivariateNormal::lambda_conditional(double eta_node) const {
    const double mean = mu_lambda + (sigma_lambda / sigma_eta) * rho * (eta_node - mu_eta);
    return Randomizer::normal(mean, std::sqrt(1.0 - rho * rho) * sigma_lambda);
}

RandomizedSpec RandomizedSpec::randomized_eta(const Randomizer& r, double fixed_lambda, int n) {
    RandomizedSpec s;
    s.target = RandomTarget::Eta;
    s.dist = r;
    s.fixed = fixed_lambda;
    s.n = n;
    return s;
}

RandomizedSpec RandomizedSpec::randomized_lambda(const Randomizer& r, double fixed_eta, int n) {
    RandomizedSpec s;
    s.target = RandomTarget::Lambda;
    s.dist = r;
    s.fixed = fixed_eta;
    s.n = n;
    return s;
}

RandomizedSpec RandomizedSpec::randomized_both(const BivariateNormal& b, int n, int m) {
    RandomizedSpec s;
    s.target = RandomTarget::Both;
    s.biv = b;
    s.n = n;
    s.m = m;
    return s;
}

HWParams RandomizedSpec::params_at(double theta) const {
    if (target == RandomTarget::Eta) return {fixed, theta};
    return {theta, fixed};
}

QuadraturePairs pairs_for(const RandomizedSpec& spec) {
    if (spec.target == RandomTarget::Both)
        throw DomainError("pairs_for applies to univariate randomization only");
    auto pairs = golub_welsch(spec.dist, spec.n);
    if (spec.target == RandomTarget::Eta) {
        for (int i = 0; i < pairs.size(); ++i)
            if (!(pairs.nodes[i] > 0.0)) {
                std::ostringstream os;
                os << "eta randomizer " << spec.dist.describe() << " generates node " << i + 1
                   << "/" << spec.n << " = " << pairs.nodes[i] << " <= 0";
                throw ConfigError(os.str());
            }
    }
    return pairs;
}

BivariatePairs bivariate_pairs(const BivariateNormal& b, int n, int m) {
    b.validate();
    BivariatePairs out;
    out.outer = golub_welsch(b.eta_marginal(), n);
    for (double eta_n : out.outer.nodes) {
        if (!(eta_n > 0.0)) {
            std::ostringstream os;
            os << "bivariate eta marginal N(" << b.mu_eta << ", " << b.sigma_eta
               << "^2) generates node " << eta_n << " <= 0";
            throw ConfigError(os.str());
        }
        out.conditional.push_back(golub_welsch(b.lambda_conditional(eta_n), m));
    }
    return out;
}

double randomized_price(const std::function<double(const HWParams&)>& pricer,
                        const RandomizedSpec& spec) {
    double acc = 0.0;
    if (spec.target == RandomTarget::Both) {
        const auto bp = bivariate_pairs(spec.biv, spec.n, spec.m);
        for (int i = 0; i < bp.outer.size(); ++i)
            for (int j = 0; j < bp.conditional[i].size(); ++j)
                acc += bp.outer.weights[i] * bp.conditional[i].weights[j] *
                       pricer({bp.conditional[i].nodes[j], bp.outer.nodes[i]});
        return acc;
    }
    const auto pairs = pairs_for(spec);
    for (int i = 0; i < pairs.size(); ++i)
        acc += pairs.weights[i] * pricer(spec.params_at(pairs.nodes[i]));
    return acc;
}

double rzcb(const YieldCurve& c, const RandomizedSpec& spec, double maturity) {
    const double r0 = c.inst_forward(0.0);
    return randomized_price(
        [&](const HWParams& p) {
            return std::exp(a_fun(c, p, 0.0, maturity) - b_fun(p.lambda, 0.0, maturity) * r0);
        },
        spec);
}

namespace {

double priced_node(const YieldCurve& c, const HWParams& p, const SwaptionSpec& s, int node) {
    try {
        return swaption_hw(c, p, s);
    } catch (const Error& e) {
        throw NumericalError("node " + std::to_string(node) + ": " + e.what());
    }
}

} // namespace

double rswaption(const YieldCurve& c, const RandomizedSpec& spec, const SwaptionSpec& s) {
    if (spec.target == RandomTarget::Both)
        return rswaption_bivariate(c, spec.biv, spec.n, spec.m, s);
    const auto pairs = pairs_for(spec);
    double acc = 0.0;
    for (int i = 0; i < pairs.size(); ++i)
        acc += pairs.weights[i] * priced_node(c, spec.params_at(pairs.nodes[i]), s, i + 1);
    return acc;
}

double rswaption_bivariate(const YieldCurve& c, const BivariateNormal& b, int n, int m,
                           const SwaptionSpec& s) {
    const auto bp = bivariate_pairs(b, n, m);
    double acc = 0.0;
    for (int i = 0; i < bp.outer.size(); ++i)
        for (int j = 0; j < bp.conditional[i].size(); ++j)
            acc += bp.outer.weights[i] * bp.conditional[i].weights[j] *
                   priced_node(c, {bp.conditional[i].nodes[j], bp.outer.nodes[i]}, s,
                               i * m + j + 1);
    return acc;
}

namespace {

RandomizedSpec bumped(const RandomizedSpec& spec, BumpTarget which, double amount) {
    RandomizedSpec out = spec;
    switch (which) {
    case BumpTarget::RandParamA: out.dist.a += amount; break;
    case BumpTarget::RandParamB: out.dist.b += amount; break;
    case BumpTarget::Fixed: out.fixed += amount; break;
    }
    return out;
}

bool valid_spec(const RandomizedSpec& spec) {
    try {
        if (spec.target == RandomTarget::Both) spec.biv.validate();
        else pairs_for(spec);
        return true;
    } catch (const Error&) {
        return false;
    }
}

} // namespace

Sensitivity sensitivity_fd(const std::function<double(const RandomizedSpec&)>& price,
                           const RandomizedSpec& spec, BumpTarget which, double delta) {
    if (!(delta > 0.0)) throw DomainError("sensitivity_fd requires delta > 0");
    const auto up = bumped(spec, which, delta);
    const auto dn = bumped(spec, which, -delta);
    const bool up_ok = valid_spec(up);
    const bool dn_ok = valid_spec(dn);
    if (up_ok && dn_ok) return {(price(up) - price(dn)) / (2.0 * delta), false};
    if (up_ok) return {(price(up) - price(spec)) / delta, true};
    if (dn_ok) return {(price(spec) - price(dn)) / delta, true};
    throw DomainError("both bump directions leave the parameter domain");
}

} // namespace rhw
