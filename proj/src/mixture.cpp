#include "rhw/mixture.hpp"
#include "rhw/error.hpp"
#include "rhw/math.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

namespace rhw {

namespace {

// per-component model parameters and weights of a spec, horizon-independent
struct ParamGrid {
    std::vector<double> weights;
    std::vector<HWParams> params;
};

ParamGrid param_grid(const RandomizedSpec& spec) {
    ParamGrid g;
    if (spec.target == RandomTarget::Both) {
        const auto bp = bivariate_pairs(spec.biv, spec.n, spec.m);
        for (int i = 0; i < bp.outer.size(); ++i)
            for (int j = 0; j < bp.conditional[i].size(); ++j) {
                g.weights.push_back(bp.outer.weights[i] * bp.conditional[i].weights[j]);
                g.params.push_back({bp.conditional[i].nodes[j], bp.outer.nodes[i]});
            }
    } else {
        const auto pairs = pairs_for(spec);
        for (int i = 0; i < pairs.size(); ++i) {
            g.weights.push_back(pairs.weights[i]);
            g.params.push_back(spec.params_at(pairs.nodes[i]));
        }
    }
    return g;
}

// splitmix64 finalizer; decorrelates per-chunk substreams from the master seed
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t chunk) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (chunk + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

MixtureDensity mixture_components(const RandomizedSpec& spec, const YieldCurve& c, double t) {
    const auto g = param_grid(spec);
    MixtureDensity m;
    for (size_t i = 0; i < g.weights.size(); ++i) {
        const auto mom = short_rate_moments(c, g.params[i], t);
        m.components.push_back({g.weights[i], mom.mean, std::sqrt(mom.variance),
                                g.params[i].lambda, g.params[i].eta});
    }
    return m;
}

double MixtureDensity::pdf(double y) const {
    double acc = 0.0;
    for (const auto& cp : components)
        acc += cp.weight * norm_pdf((y - cp.mean) / cp.stdev) / cp.stdev;
    return acc;
}

double MixtureDensity::cdf(double y) const {
    double acc = 0.0;
    for (const auto& cp : components) acc += cp.weight * norm_cdf((y - cp.mean) / cp.stdev);
    return acc;
}

double MixtureDensity::mean() const {
    double acc = 0.0;
    for (const auto& cp : components) acc += cp.weight * cp.mean;
    return acc;
}

double MixtureDensity::variance() const { return central_moment(2); }

double MixtureDensity::central_moment(int k) const {
    const double mu = mean();
    double acc = 0.0;
    for (const auto& cp : components) {
        const double d = cp.mean - mu;
        // E[(d + sigma Z)^k] expanded over normal moments
        double term = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= k; j += 2) {
            double dfact = 1.0;
            for (int i = j - 1; i > 1; i -= 2) dfact *= i;
            term += binom * std::pow(cp.stdev, j) * dfact * std::pow(d, k - j);
            binom *= double(k - j) * double(k - j - 1) / double((j + 1) * (j + 2));
        }
        acc += cp.weight * term;
    }
    return acc;
}

double mixture_pdf(const RandomizedSpec& spec, const YieldCurve& c, double t, double y) {
    if (!(t > 0.0)) throw DomainError("mixture density is a point mass at t = 0");
    return mixture_components(spec, c, t).pdf(y);
}

std::vector<double> lambda_weights(const RandomizedSpec& spec, const YieldCurve& c, double t,
                                   double y) {
    if (!(t > 0.0)) throw DomainError("posterior weights undefined at t = 0");
    const auto m = mixture_components(spec, c, t);
    std::vector<double> logw(m.components.size());
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m.components.size(); ++i) {
        const auto& cp = m.components[i];
        const double z = (y - cp.mean) / cp.stdev;
        logw[i] = std::log(cp.weight) - std::log(cp.stdev) - 0.5 * z * z;
        mx = std::max(mx, logw[i]);
    }
    double sum = 0.0;
    for (auto& w : logw) {
        w = std::exp(w - mx);
        sum += w;
    }
    for (auto& w : logw) w /= sum;
    return logw;
}

LocalCoeffs local_coeffs(const RandomizedSpec& spec, const YieldCurve& c, double t, double y) {
    const auto m = mixture_components(spec, c, t);
    const auto lw = lambda_weights(spec, c, t, y);
    const double f = c.inst_forward(t);
    const double fp = c.forward_slope(t);
    double drift = 0.0, var = 0.0;
    for (size_t i = 0; i < lw.size(); ++i) {
        const auto& cp = m.components[i];
        // lambda_i (psi_i(t) - y) with psi_i = f + f'/lambda_i + eta_i^2/(2 lambda_i^2)(1-e^{-2 lambda_i t})
        drift += lw[i] * (cp.lambda * (f - y) + fp +
                          cp.eta * cp.eta * expm1_ratio(2.0 * cp.lambda, t));
        var += lw[i] * cp.eta * cp.eta;
    }
    if (spec.target == RandomTarget::Lambda) var = spec.fixed * spec.fixed;
    return {drift, var};
}

namespace {

// component constants of one Euler step, shared by all paths
struct StepCoeffs {
    std::vector<double> log_w_over_sd; // log(w_i) - log(sd_i)
    std::vector<double> mean, inv_sd;
    std::vector<double> drift_const; // lambda_i f + f' + eta_i^2 G(2 lambda_i, t)
    std::vector<double> lambda, eta2;
    bool degenerate; // t == 0: posterior replaced by the prior
};

StepCoeffs step_coeffs(const ParamGrid& g, const YieldCurve& c, double t) {
    StepCoeffs sc;
    const size_t n = g.weights.size();
    sc.degenerate = (t == 0.0);
    sc.log_w_over_sd.resize(n);
    sc.mean.resize(n);
    sc.inv_sd.resize(n);
    sc.drift_const.resize(n);
    sc.lambda.resize(n);
    sc.eta2.resize(n);
    const double f = c.inst_forward(t);
    const double fp = c.forward_slope(t);
    for (size_t i = 0; i < n; ++i) {
        const auto& p = g.params[i];
        sc.lambda[i] = p.lambda;
        sc.eta2[i] = p.eta * p.eta;
        sc.drift_const[i] = p.lambda * f + fp + sc.eta2[i] * expm1_ratio(2.0 * p.lambda, t);
        if (!sc.degenerate) {
            const auto mom = short_rate_moments(c, p, t);
            const double sd = std::sqrt(mom.variance);
            sc.mean[i] = mom.mean;
            sc.inv_sd[i] = 1.0 / sd;
            sc.log_w_over_sd[i] = std::log(g.weights[i]) - std::log(sd);
        } else {
            sc.log_w_over_sd[i] = g.weights[i]; // stores the prior weight directly
        }
    }
    return sc;
}

} // namespace

std::vector<double> simulate_local_vol(const RandomizedSpec& spec, const YieldCurve& c, double T,
                                       int steps, int paths, std::uint64_t seed) {
    if (!(T > 0.0) || steps < 1 || paths < 1)
        throw DomainError("simulate_local_vol requires T > 0, steps >= 1, paths >= 1");
    const auto grid = param_grid(spec);
    const size_t ncomp = grid.weights.size();
    const double dt = T / steps;
    const double sqdt = std::sqrt(dt);
    const bool const_var = (spec.target == RandomTarget::Lambda);
    const double const_var_value = spec.fixed * spec.fixed;
    const double r0 = c.inst_forward(0.0);

    // one table of per-step component constants, shared read-only by all chunks
    std::vector<StepCoeffs> table;
    table.reserve(steps);
    for (int k = 0; k < steps; ++k) table.push_back(step_coeffs(grid, c, k * dt));

    auto run_chunk = [&](int begin, int end, std::uint64_t chunk_seed, double* out) {
        std::mt19937_64 eng(chunk_seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> wbuf(ncomp);
        for (int pth = begin; pth < end; ++pth) {
            double r = r0;
            for (int k = 0; k < steps; ++k) {
                const auto& sc = table[k];
                double drift = 0.0, var = 0.0;
                if (sc.degenerate) {
                    for (size_t i = 0; i < ncomp; ++i) {
                        const double w = sc.log_w_over_sd[i];
                        drift += w * (sc.drift_const[i] - sc.lambda[i] * r);
                        var += w * sc.eta2[i];
                    }
                } else {
                    double mx = -std::numeric_limits<double>::infinity();
                    for (size_t i = 0; i < ncomp; ++i) {
                        const double z = (r - sc.mean[i]) * sc.inv_sd[i];
                        wbuf[i] = sc.log_w_over_sd[i] - 0.5 * z * z;
                        mx = std::max(mx, wbuf[i]);
                    }
                    double sum = 0.0;
                    for (size_t i = 0; i < ncomp; ++i) {
                        wbuf[i] = std::exp(wbuf[i] - mx);
                        sum += wbuf[i];
                    }
                    for (size_t i = 0; i < ncomp; ++i) {
                        const double w = wbuf[i] / sum;
                        drift += w * (sc.drift_const[i] - sc.lambda[i] * r);
                        var += w * sc.eta2[i];
                    }
                }
                if (const_var) var = const_var_value;
                r += drift * dt + std::sqrt(var) * sqdt * gauss(eng);
            }
            out[pth] = r;
        }
    };

    std::vector<double> out(paths);
    constexpr int chunk = 8192;
    const unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> running;
    int next = 0, cidx = 0;
    while (next < paths) {
        const int begin = next;
        const int end = std::min(paths, begin + chunk);
        const std::uint64_t cs = mix_seed(seed, static_cast<std::uint64_t>(cidx));
        if (running.size() >= nthreads) {
            running.front().get();
            running.erase(running.begin());
        }
        running.push_back(std::async(std::launch::async, run_chunk, begin, end, cs, out.data()));
        next = end;
        ++cidx;
    }
    for (auto& f : running) f.get();
    return out;
}

DistanceStats density_distance(std::vector<double> samples, const MixtureDensity& m) {
    if (samples.size() < 2) throw DomainError("density_distance needs at least two samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double F = m.cdf(samples[i]);
        ks = std::max(ks, std::max(std::abs(F - (i + 1) / n), std::abs(F - i / n)));
    }
    // L1 distance between the binned empirical law and the mixture over a wide grid
    double lo = m.components.front().mean, hi = lo, sdmax = 0.0;
    for (const auto& cp : m.components) {
        lo = std::min(lo, cp.mean);
        hi = std::max(hi, cp.mean);
        sdmax = std::max(sdmax, cp.stdev);
    }
    lo -= 8.0 * sdmax;
    hi += 8.0 * sdmax;
    const int nb = 200;
    const double width = (hi - lo) / nb;
    std::vector<double> counts(nb, 0.0);
    double outside = 0.0;
    for (double x : samples) {
        if (x < lo || x >= hi) { outside += 1.0; continue; }
        counts[static_cast<int>((x - lo) / width)] += 1.0;
    }
    double l1 = outside / n;
    for (int b = 0; b < nb; ++b) {
        const double pb = m.cdf(lo + (b + 1) * width) - m.cdf(lo + b * width);
        l1 += std::abs(counts[b] / n - pb);
    }
    return {ks, l1};
}

double ks_critical(int n, double alpha) {
    // asymptotic inverse of the Kolmogorov distribution tail
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c / std::sqrt(static_cast<double>(n));
}

} // namespace rhw
