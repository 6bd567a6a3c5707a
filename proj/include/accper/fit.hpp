#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace accper {

struct fit_result {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t points_used = 0;
};

// Least-squares fit y ~ intercept + slope * x.
inline fit_result fit_affine(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_affine: size mismatch");
    const std::size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("fit_affine: need at least 2 points");
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_affine: degenerate abscissae");
    fit_result r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (r.intercept + r.slope * xs[i]);
        ss += e * e;
    }
    r.residual_rms = std::sqrt(ss / static_cast<double>(n));
    r.points_used = n;
    return r;
}

}  // namespace accper
