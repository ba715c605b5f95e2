#pragma once

#include <string>

namespace rhw {

enum class Dist {
    Uniform,     // U([a, b]), a < b (a == b allowed as the degenerate point mass)
    Normal,      // N(a, b^2), b > 0 (b == 0 allowed as the degenerate point mass)
    Exponential, // Exp(a), rate a > 0
    Gamma,       // Gamma(shape a > 0, scale b > 0)
    ChiSquareNC, // noncentral chi-square, df a > 0, noncentrality b >= 0
};

/// A parameter distribution with closed-form raw moments. Supplies the moment
/// sequence from which Gauss-quadrature pairs are constructed.
struct Randomizer {
    Dist kind = Dist::Normal;
    double a = 0.0;
    double b = 1.0;

    static Randomizer uniform(double a, double b) { return {Dist::Uniform, a, b}; }
    static Randomizer normal(double mean, double stdev) { return {Dist::Normal, mean, stdev}; }
    static Randomizer exponential(double rate) { return {Dist::Exponential, rate, 0.0}; }
    static Randomizer gamma(double shape, double scale) { return {Dist::Gamma, shape, scale}; }
    static Randomizer chi_square_nc(double df, double noncentrality) {
        return {Dist::ChiSquareNC, df, noncentrality};
    }

    /// Throws DomainError if the parameters violate the distribution's constraints.
    void validate() const;

    double mean() const;
    double stdev() const;
    bool degenerate() const; // zero variance (point mass)

    std::string describe() const;
};

Dist dist_from_name(const std::string& name);
std::string dist_name(Dist d);

/// E[theta^n]. Closed forms per family; the noncentral chi-square uses its
/// moment recursion. Throws DomainError if the parameters are invalid or the
/// requested moment overflows double precision.
double raw_moment(const Randomizer& r, int n);

} // namespace rhw
