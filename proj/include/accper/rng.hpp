#pragma once

// Counter-based splittable RNG. Replicate r of a run seeded with s draws from
// an independent splitmix64 stream keyed by (s, r), so parallel and serial
// executions agree bit for bit.

#include <cmath>
#include <cstdint>

namespace accper {

struct rng_stream {
    std::uint64_t state;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    explicit rng_stream(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline rng_stream stream_for(std::uint64_t seed, std::uint64_t replicate) {
    std::uint64_t key = rng_stream::mix(replicate * 0xA24BAED4963EE407ull + 0x6A09E667F3BCC909ull);
    return rng_stream(rng_stream::mix(seed ^ key));
}

// Binomial(n, p) by single-uniform CDF inversion for n <= 64 (one stream draw
// per variate; symmetry flip keeps the walk short and the pmf away from
// underflow), Bernoulli summation beyond.
inline int binomial_draw(rng_stream& g, int n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - binomial_draw(g, n, 1.0 - p);
    if (n <= 64) {
        const double u = g.uniform01();
        const double q = 1.0 - p, odds = p / q;
        double pmf = std::pow(q, n), cdf = pmf;
        int i = 0;
        while (u > cdf && i < n) {
            pmf *= odds * static_cast<double>(n - i) / static_cast<double>(i + 1);
            ++i;
            cdf += pmf;
        }
        return i;
    }
    int c = 0;
    for (int i = 0; i < n; ++i) c += (g.uniform01() < p) ? 1 : 0;
    return c;
}

// Poisson(lambda) by single-uniform CDF inversion for small rates; larger
// rates split recursively (Poisson additivity), staying exact and
// deterministic for any lambda.
inline long long poisson_draw(rng_stream& g, double lambda) {
    if (!(lambda > 0.0)) return 0;
    if (lambda > 30.0) return poisson_draw(g, lambda / 2.0) + poisson_draw(g, lambda / 2.0);
    const double u = g.uniform01();
    double pmf = std::exp(-lambda), cdf = pmf;
    long long i = 0;
    while (u > cdf && i < 1000) {
        ++i;
        pmf *= lambda / static_cast<double>(i);
        cdf += pmf;
    }
    return i;
}

}  // namespace accper
