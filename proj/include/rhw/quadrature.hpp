#pragma once

#include "rhw/randomizer.hpp"

#include <vector>

namespace rhw {

/// Gauss-quadrature weights and nodes {w_n, theta_n} for a randomizer.
/// Invariants: weights positive and summing to 1, nodes strictly increasing,
/// and sum w_n theta_n^k reproduces the raw moments for k <= 2N-1.
struct QuadraturePairs {
    std::vector<double> weights;
    std::vector<double> nodes;

    int size() const { return static_cast<int>(nodes.size()); }
};

inline constexpr int max_quadrature_order = 20;

/// Build the N-point Gauss rule of a randomizer from its moments:
/// Gram matrix of monomial cross-moments, Cholesky factorization, three-term
/// recurrence coefficients, then eigenvalues/first eigenvector components of
/// the symmetric tridiagonal Jacobi matrix (Golub & Welsch).
///
/// Location-scale families (uniform, normal, exponential, gamma) are reduced
/// to a standard member and the nodes mapped back affinely; weights are
/// invariant under that map, so the result is identical in exact arithmetic
/// and far better conditioned in double precision.
///
/// A degenerate (zero-variance) randomizer yields the single pair {1, mean}.
/// Throws ConditioningError if the Gram matrix is numerically non-PD,
/// DomainError for invalid parameters or N outside [1, max_quadrature_order].
QuadraturePairs golub_welsch(const Randomizer& r, int n);

/// Affine map of a rule computed for a standard member: nodes' = shift + scale * nodes,
/// weights unchanged. Equals golub_welsch of the transformed randomizer.
QuadraturePairs scale_pairs(const QuadraturePairs& base, double shift, double scale);

} // namespace rhw
