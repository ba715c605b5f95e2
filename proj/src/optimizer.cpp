#include "rhw/optimizer.hpp"
#include "rhw/error.hpp"

#include <algorithm>
#include <cmath>

namespace rhw {

namespace {

void clip(std::vector<double>& x, const std::vector<double>& lo, const std::vector<double>& hi) {
    for (size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

} // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& lo,
                          const std::vector<double>& hi, const SimplexOptions& opts) {
    const size_t d = x0.size();
    if (d == 0 || lo.size() != d || hi.size() != d)
        throw DomainError("nelder_mead: inconsistent dimensions");
    clip(x0, lo, hi);

    std::vector<std::vector<double>> xs(d + 1, x0);
    for (size_t i = 0; i < d; ++i) {
        double step = 0.05 * (hi[i] - lo[i]);
        if (xs[i + 1][i] + step > hi[i]) step = -step;
        xs[i + 1][i] += step;
        clip(xs[i + 1], lo, hi);
    }
    std::vector<double> fs(d + 1);
    for (size_t i = 0; i <= d; ++i) fs[i] = f(xs[i]);

    SimplexResult res;
    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        // order vertices best..worst
        std::vector<size_t> ord(d + 1);
        for (size_t i = 0; i <= d; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return fs[a] < fs[b]; });
        const size_t best = ord[0], worst = ord[d], second = ord[d - 1];

        double diameter = 0.0;
        for (size_t i = 0; i <= d; ++i)
            for (size_t j = 0; j < d; ++j)
                diameter = std::max(diameter, std::abs(xs[i][j] - xs[best][j]));
        if (diameter < opts.diameter_tol && fs[worst] - fs[best] < opts.objective_tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (size_t j = 0; j < d; ++j) centroid[j] += xs[i][j] / d;
        }
        auto blend = [&](double coef) {
            std::vector<double> x(d);
            for (size_t j = 0; j < d; ++j) x[j] = centroid[j] + coef * (centroid[j] - xs[worst][j]);
            clip(x, lo, hi);
            return x;
        };

        auto xr = blend(1.0);
        const double fr = f(xr);
        if (fr < fs[best]) {
            auto xe = blend(2.0);
            const double fe = f(xe);
            if (fe < fr) { xs[worst] = std::move(xe); fs[worst] = fe; }
            else { xs[worst] = std::move(xr); fs[worst] = fr; }
        } else if (fr < fs[second]) {
            xs[worst] = std::move(xr);
            fs[worst] = fr;
        } else {
            auto xc = blend(fr < fs[worst] ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = std::move(xc);
                fs[worst] = fc;
            } else { // shrink towards the best vertex
                for (size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (size_t j = 0; j < d; ++j) xs[i][j] = 0.5 * (xs[i][j] + xs[best][j]);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }

    size_t best = 0;
    for (size_t i = 1; i <= d; ++i)
        if (fs[i] < fs[best]) best = i;
    res.x = xs[best];
    res.value = fs[best];
    return res;
}

} // namespace rhw
