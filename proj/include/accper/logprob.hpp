#pragma once

// Numerically stable log-scale primitives. Zero probability is encoded as
// -infinity in log scale, never as a sentinel.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace accper {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// ln(k!), exact integer-product path for k <= 20, log-gamma beyond.
inline double log_factorial(std::int64_t k) {
    if (k < 0) throw std::domain_error("log_factorial: k must be >= 0");
    if (k <= 20) {
        std::uint64_t f = 1;
        for (std::int64_t i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
        return std::log(static_cast<double>(f));
    }
    return std::lgamma(static_cast<double>(k) + 1.0);
}

// 1 - (1-I)^n evaluated through log1p/expm1 so tiny results keep full
// relative precision. I may stray outside [0,1] by at most 1e-12
// (quadrature drift); anything worse is a domain error.
inline double complement_power(double I, std::int64_t n) {
    if (n < 1) throw std::domain_error("complement_power: n must be >= 1");
    if (!(I >= -1e-12 && I <= 1.0 + 1e-12))
        throw std::domain_error("complement_power: I outside [0,1] beyond tolerance");
    if (I <= 0.0) return 0.0;
    if (I >= 1.0) return 1.0;
    double r = -std::expm1(static_cast<double>(n) * std::log1p(-I));
    if (r < 0.0) r = 0.0;
    if (r > 1.0) r = 1.0;
    return r;
}

// log(sum(exp(terms))) guarded against empty input and -inf terms.
inline double log_sum_exp(const std::vector<double>& terms) {
    double mx = neg_inf;
    for (double t : terms)
        if (t > mx) mx = t;
    if (mx == neg_inf) return neg_inf;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s);
}

}  // namespace accper
