#include "rhw/quadrature.hpp"
#include "rhw/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rhw {

namespace {

// Eigenvalues of a symmetric tridiagonal matrix together with the first
// component of each normalized eigenvector, via QL iteration with implicit
// shifts. diag/offd are overwritten; z accumulates the first row of the
// rotation product (initialized to e_1).
template <typename Real>
void tridiag_ql(std::vector<Real>& diag, std::vector<Real>& offd, std::vector<Real>& z) {
    const int n = static_cast<int>(diag.size());
    z.assign(n, Real(0));
    z[0] = Real(1);
    if (n == 1) return;

    Real scale = Real(0);
    for (int i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(diag[i]) + (i < n - 1 ? std::abs(offd[i]) : Real(0)));
    const Real tol = Real(1e-14);

    offd.push_back(Real(0)); // sentinel e[n-1]
    for (int l = 0; l < n; ++l) {
        int sweeps = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const Real dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(offd[m]) <= tol * (dd + scale)) break;
            }
            if (m == l) break;
            if (++sweeps > 50)
                throw NumericalError("tridiagonal QL iteration did not converge in 50 sweeps");
            Real g = (diag[l + 1] - diag[l]) / (2 * offd[l]);
            Real r = std::hypot(g, Real(1));
            g = diag[m] - diag[l] + offd[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
            Real s = 1, c = 1, p = 0;
            int i;
            for (i = m - 1; i >= l; --i) {
                Real f = s * offd[i];
                const Real b = c * offd[i];
                r = std::hypot(f, g);
                offd[i + 1] = r;
                if (r == Real(0)) {
                    diag[i + 1] -= p;
                    offd[m] = 0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (r == Real(0) && i >= l) continue;
            diag[l] -= p;
            offd[l] = g;
            offd[m] = 0;
        } while (m != l);
    }
    offd.pop_back();
}

struct AffineReduction {
    Randomizer base;
    double shift;
    double scale;
};

// Location-scale families are computed for a standard member and mapped back;
// this keeps the Gram matrix conditioning independent of the parameters.
AffineReduction reduce_to_standard(const Randomizer& r) {
    switch (r.kind) {
    case Dist::Uniform: return {Randomizer::uniform(0.0, 1.0), r.a, r.b - r.a};
    case Dist::Normal: return {Randomizer::normal(0.0, 1.0), r.a, r.b};
    case Dist::Exponential: return {Randomizer::exponential(1.0), 0.0, 1.0 / r.a};
    case Dist::Gamma: return {Randomizer::gamma(r.a, 1.0), 0.0, r.b};
    case Dist::ChiSquareNC: return {r, 0.0, 1.0};
    }
    return {r, 0.0, 1.0};
}

} // namespace

QuadraturePairs golub_welsch(const Randomizer& r, int n) {
    r.validate();
    if (n < 1 || n > max_quadrature_order)
        throw DomainError("quadrature order must lie in [1, " + std::to_string(max_quadrature_order) + "]");
    if (r.degenerate()) return {{1.0}, {r.mean()}};

    const auto [base, shift, scale] = reduce_to_standard(r);

    // Gram matrix of monomial cross-moments mu_{i,j} = E[theta^{i+j}]
    std::vector<double> mom(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k) mom[k] = raw_moment(base, k);
    Eigen::MatrixXd gram(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) gram(i, j) = mom[i + j];

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw ConditioningError("moment Gram matrix numerically non-PD: order " + std::to_string(n) +
                                " too large for " + r.describe());
    const Eigen::MatrixXd R = llt.matrixU(); // gram = R^T R

    // Three-term recurrence coefficients from the Cholesky factor
    std::vector<double> diag(n), offd(std::max(n - 1, 0));
    for (int j = 1; j <= n; ++j) {
        const double t1 = R(j - 1, j) / R(j - 1, j - 1);
        const double t2 = j >= 2 ? R(j - 2, j - 1) / R(j - 2, j - 2) : 0.0;
        diag[j - 1] = t1 - t2;
    }
    for (int j = 1; j <= n - 1; ++j) offd[j - 1] = R(j, j) / R(j - 1, j - 1); // sqrt(beta_j)

    std::vector<double> z;
    tridiag_ql(diag, offd, z);

    QuadraturePairs out;
    out.weights.resize(n);
    out.nodes.resize(n);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return diag[i] < diag[j]; });
    for (int i = 0; i < n; ++i) {
        out.nodes[i] = shift + scale * diag[idx[i]];
        out.weights[i] = z[idx[i]] * z[idx[i]];
    }
    return out;
}

QuadraturePairs scale_pairs(const QuadraturePairs& base, double shift, double scale) {
    if (scale == 0.0) throw DomainError("scale_pairs requires scale != 0");
    QuadraturePairs out = base;
    for (auto& x : out.nodes) x = shift + scale * x;
    if (scale < 0.0) { // keep nodes increasing
        std::reverse(out.nodes.begin(), out.nodes.end());
        std::reverse(out.weights.begin(), out.weights.end());
    }
    return out;
}

} // namespace rhw
