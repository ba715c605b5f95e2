#pragma once

#include <functional>
#include <vector>

namespace rhw {

struct SimplexOptions {
    double diameter_tol = 1e-6;   // max vertex distance to the best point
    double objective_tol = 1e-8;  // best-to-worst objective spread
    int max_iterations = 2000;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bounded Nelder-Mead: candidate vertices are clipped into [lo, hi].
/// Converged when the simplex diameter and the objective spread both fall
/// below their tolerances.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& lo,
                          const std::vector<double>& hi, const SimplexOptions& opts = {});

} // namespace rhw
