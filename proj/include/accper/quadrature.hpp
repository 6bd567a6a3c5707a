#pragma once

// Cumulative quadrature on uniform grids. The running integral is needed at
// every node simultaneously, which is why the composite trapezoid (order 2,
// one pass) is the default; a 4th-order cumulative rule is provided for the
// one recursion whose error near 0 is amplified exponentially.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace accper {

// Running composite-trapezoid integral; result[0] = 0, exact for affine
// integrands. `h` is the uniform spacing.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& v, double h) {
    if (v.size() < 2) throw std::invalid_argument("cumulative_trapezoid: need >= 2 grid points");
    if (!(h > 0.0)) throw std::invalid_argument("cumulative_trapezoid: spacing must be positive");
    std::vector<double> out(v.size());
    out[0] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        acc += (v[i - 1] + v[i]) * (h / 2.0);
        out[i] = acc;
    }
    return out;
}

// Overload taking an explicit grid; rejects non-uniform spacing.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& x,
                                                const std::vector<double>& v) {
    if (x.size() != v.size()) throw std::invalid_argument("cumulative_trapezoid: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("cumulative_trapezoid: need >= 2 grid points");
    double h = x[1] - x[0];
    if (!(h > 0.0)) throw std::invalid_argument("cumulative_trapezoid: spacing must be positive");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * (std::abs(x[i]) + 1.0))
            throw std::invalid_argument("cumulative_trapezoid: grid is not uniform");
    return cumulative_trapezoid(v, h);
}

// Running integral with a 4th-order composite Newton-Cotes segment rule
// (cubic through the four nodes nearest each segment). Needs >= 4 nodes.
inline std::vector<double> cumulative_order4(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    if (n < 4) throw std::invalid_argument("cumulative_order4: need >= 4 grid points");
    if (!(h > 0.0)) throw std::invalid_argument("cumulative_order4: spacing must be positive");
    std::vector<double> out(n);
    out[0] = 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        double seg;
        if (j == 0)
            seg = h * (9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]) / 24.0;
        else if (j + 2 < n)
            seg = h * (-v[j - 1] + 13.0 * v[j] + 13.0 * v[j + 1] - v[j + 2]) / 24.0;
        else
            seg = h * (v[n - 4] - 5.0 * v[n - 3] + 19.0 * v[n - 2] + 9.0 * v[n - 1]) / 24.0;
        acc += seg;
        out[j + 1] = acc;
    }
    return out;
}

}  // namespace accper
