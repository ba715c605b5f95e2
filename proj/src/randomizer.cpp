#include "rhw/randomizer.hpp"
#include "rhw/error.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace rhw {

namespace {

double std_normal_moment(int n) {
    // (n-1)!! for even n, 0 otherwise
    if (n % 2 == 1) return 0.0;
    double r = 1.0;
    for (int k = n - 1; k > 1; k -= 2) r *= k;
    return r;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

// Raw-moment recursion for the noncentral chi-square with df a, noncentrality b.
std::vector<double> chi2nc_moments(double a, double b, int n) {
    std::vector<double> m(n + 1, 1.0);
    std::vector<double> fact(n + 1, 1.0); // k!
    for (int k = 1; k <= n; ++k) fact[k] = fact[k - 1] * k;
    for (int k = 1; k <= n; ++k) {
        double s = std::pow(2.0, k - 1) * fact[k - 1] * (a + k * b);
        for (int j = 1; j <= k - 1; ++j)
            s += fact[k - 1] * std::pow(2.0, j - 1) / fact[k - j] * (a + j * b) * m[k - j];
        m[k] = s;
    }
    return m;
}

} // namespace

void Randomizer::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw DomainError("randomizer parameters must be finite");
    switch (kind) {
    case Dist::Uniform:
        if (a > b) throw DomainError("uniform randomizer requires a <= b");
        break;
    case Dist::Normal:
        if (b < 0.0) throw DomainError("normal randomizer requires stdev >= 0");
        break;
    case Dist::Exponential:
        if (a <= 0.0) throw DomainError("exponential randomizer requires rate > 0");
        break;
    case Dist::Gamma:
        if (a <= 0.0 || b <= 0.0) throw DomainError("gamma randomizer requires shape > 0 and scale > 0");
        break;
    case Dist::ChiSquareNC:
        if (a <= 0.0 || b < 0.0)
            throw DomainError("noncentral chi-square requires df > 0 and noncentrality >= 0");
        break;
    }
}

double raw_moment(const Randomizer& r, int n) {
    r.validate();
    if (n < 0) throw DomainError("moment order must be nonnegative");
    if (n == 0) return 1.0;

    double m = 0.0;
    switch (r.kind) {
    case Dist::Uniform:
        if (r.a == r.b) {
            m = std::pow(r.a, n);
        } else {
            m = (std::pow(r.b, n + 1) - std::pow(r.a, n + 1)) / ((n + 1) * (r.b - r.a));
        }
        break;
    case Dist::Normal: {
        // binomial expansion over standard-normal moments
        for (int k = 0; k <= n; k += 2)
            m += binomial(n, k) * std::pow(r.a, n - k) * std::pow(r.b, k) * std_normal_moment(k);
        break;
    }
    case Dist::Exponential:
        // n! / a^n, in log space to delay overflow
        m = std::exp(std::lgamma(n + 1.0) - n * std::log(r.a));
        break;
    case Dist::Gamma:
        // b^n Gamma(n + a) / Gamma(a)
        m = std::exp(n * std::log(r.b) + std::lgamma(n + r.a) - std::lgamma(r.a));
        break;
    case Dist::ChiSquareNC:
        m = chi2nc_moments(r.a, r.b, n)[n];
        break;
    }
    if (!std::isfinite(m))
        throw DomainError("raw moment of order " + std::to_string(n) + " is not representable for " +
                          r.describe());
    return m;
}

double Randomizer::mean() const { return raw_moment(*this, 1); }

double Randomizer::stdev() const {
    const double m1 = raw_moment(*this, 1);
    const double m2 = raw_moment(*this, 2);
    return std::sqrt(std::max(m2 - m1 * m1, 0.0));
}

bool Randomizer::degenerate() const {
    return (kind == Dist::Uniform && a == b) || (kind == Dist::Normal && b == 0.0);
}

std::string Randomizer::describe() const {
    std::ostringstream os;
    os << dist_name(kind) << "(" << a;
    if (kind != Dist::Exponential) os << ", " << b;
    os << ")";
    return os.str();
}

Dist dist_from_name(const std::string& name) {
    if (name == "uniform") return Dist::Uniform;
    if (name == "normal") return Dist::Normal;
    if (name == "exponential") return Dist::Exponential;
    if (name == "gamma") return Dist::Gamma;
    if (name == "chi2nc" || name == "chi-square-nc") return Dist::ChiSquareNC;
    throw DomainError("unknown distribution name: " + name);
}

std::string dist_name(Dist d) {
    switch (d) {
    case Dist::Uniform: return "uniform";
    case Dist::Normal: return "normal";
    case Dist::Exponential: return "exponential";
    case Dist::Gamma: return "gamma";
    case Dist::ChiSquareNC: return "chi2nc";
    }
    return "?";
}

} // namespace rhw
