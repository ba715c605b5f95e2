#pragma once

#include "rhw/curve.hpp"
#include "rhw/rand_layer.hpp"

#include <cstdint>
#include <vector>

namespace rhw {

/// One normal component of the short-rate marginal at a fixed horizon,
/// together with the model parameters it came from.
struct MixtureComponent {
    double weight;
    double mean;
    double stdev;
    double lambda;
    double eta;
};

/// Normal-mixture marginal of the randomized short rate at horizon t.
struct MixtureDensity {
    std::vector<MixtureComponent> components;

    double pdf(double y) const;
    double cdf(double y) const;
    double mean() const;
    double variance() const;
    /// k-th central moment, exact through the per-component normal moments.
    double central_moment(int k) const;
};

/// Components at horizon t: weights from the quadrature rule, means/stdevs
/// from the constituent models' marginals. Valid for t >= 0 (degenerate at 0).
MixtureDensity mixture_components(const RandomizedSpec& spec, const YieldCurve& c, double t);

/// Mixture density value; throws DomainError at t = 0 (point mass).
double mixture_pdf(const RandomizedSpec& spec, const YieldCurve& c, double t, double y);

/// Posterior component weights at (t, y): w_n f_n(y) / sum w f, evaluated in
/// log space so far tails renormalize instead of underflowing.
std::vector<double> lambda_weights(const RandomizedSpec& spec, const YieldCurve& c, double t,
                                   double y);

struct LocalCoeffs {
    double drift;
    double variance;
};

/// Drift and squared diffusion of the one-dimensional SDE whose marginal law
/// is the mixture: drift is the posterior-weighted constituent drift, variance
/// the posterior-weighted eta^2 (constant eta^2 when only lambda is random).
LocalCoeffs local_coeffs(const RandomizedSpec& spec, const YieldCurve& c, double t, double y);

/// (t, y) -> (drift, variance) evaluator over a fixed spec and curve.
class LocalVolField {
public:
    LocalVolField(const RandomizedSpec& spec, const YieldCurve& c) : spec_(spec), curve_(&c) {}
    LocalCoeffs operator()(double t, double y) const { return local_coeffs(spec_, *curve_, t, y); }

private:
    RandomizedSpec spec_;
    const YieldCurve* curve_;
};

/// Euler paths of dr = drift dt + sqrt(variance) dW from r(0) = f(0,0);
/// returns the terminal samples. Deterministic in (seed, paths, steps)
/// irrespective of thread count: paths are simulated in fixed-size chunks
/// with per-chunk substreams derived from the master seed.
std::vector<double> simulate_local_vol(const RandomizedSpec& spec, const YieldCurve& c, double T,
                                       int steps, int paths, std::uint64_t seed);

struct DistanceStats {
    double ks; // Kolmogorov-Smirnov statistic against the mixture CDF
    double l1; // L1 histogram distance
};

/// Goodness of fit of terminal samples against the analytic mixture.
DistanceStats density_distance(std::vector<double> samples, const MixtureDensity& m);

/// Large-sample KS critical value c(alpha)/sqrt(n); alpha in {0.1, 0.05, 0.01}.
double ks_critical(int n, double alpha = 0.01);

} // namespace rhw
