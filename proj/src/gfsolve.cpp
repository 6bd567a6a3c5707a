#include "accper/gfsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "accper/logprob.hpp"
#include "accper/quadrature.hpp"

namespace accper {

namespace {

void check_grid(int M) {
    if (M < 64) throw std::invalid_argument("gfsolve: grid size must be >= 64");
}

// g_k values (survival complement of f_k(0, .)) on the uniform b-grid.
std::vector<double> survival_complement_values(int N, int k, int M) {
    const double h = 1.0 / M;
    std::vector<double> g(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i <= M; ++i)
        g[static_cast<std::size_t>(i)] = complement_power(i * h, N);
    for (int step = 1; step < k; ++step) {
        std::vector<double> I = cumulative_trapezoid(g, h);
        for (int i = 0; i <= M; ++i) {
            double v = I[static_cast<std::size_t>(i)];
            g[static_cast<std::size_t>(i)] = complement_power(v < 1.0 ? v : 1.0, N);
        }
    }
    return g;
}

// Raw-value iteration of f_k(s, .) for s > 0.
std::vector<double> raw_f_values(int N, int k, double s, int M) {
    const double h = 1.0 / M;
    std::vector<double> f(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i <= M; ++i) {
        const double b = i * h;
        f[static_cast<std::size_t>(i)] = std::pow(1.0 - b + s * b, N);
    }
    for (int step = 1; step < k; ++step) {
        std::vector<double> I = cumulative_trapezoid(f, h);
        for (int i = 0; i <= M; ++i) {
            const double b = i * h;
            double base = 1.0 - b + I[static_cast<std::size_t>(i)];
            base = std::clamp(base, 0.0, 1.0);
            f[static_cast<std::size_t>(i)] = std::pow(base, N);
        }
    }
    return f;
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

grid_function iterate_f(int N, int k, double s, int M) {
    if (N < 1 || k < 1) throw std::invalid_argument("iterate_f: need N >= 1, k >= 1");
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("iterate_f: s must be in [0,1]");
    check_grid(M);
    grid_function out;
    out.grid_points = M;
    if (s == 0.0) {
        out.representation = grid_repr::survival_complement;
        out.values = survival_complement_values(N, k, M);
        const double fine = survival_value(N, k, 2 * M);
        out.doubling_rel_change = rel_diff(out.values.back(), fine);
    } else {
        out.representation = grid_repr::raw_value;
        out.values = raw_f_values(N, k, s, M);
        std::vector<double> fine = raw_f_values(N, k, s, 2 * M);
        out.doubling_rel_change = rel_diff(out.values.back(), fine.back());
    }
    out.precision_warning = out.doubling_rel_change > 1e-6;
    return out;
}

double survival_value(int N, int k, int M) {
    if (N < 1 || k < 1) throw std::invalid_argument("survival_value: need N >= 1, k >= 1");
    check_grid(M);
    if (k == 1) return complement_power(1.0, N);  // = 1
    return survival_complement_values(N, k, M).back();
}

survival_result survival_prob(int N, int k, int M) {
    if (M <= 0) M = default_grid(N);
    survival_result r;
    r.grid_points = M;
    r.value = survival_value(N, k, M);
    const double fine = survival_value(N, k, 2 * M);
    r.doubling_rel_change = rel_diff(r.value, fine);
    r.precision_warning = r.doubling_rel_change > 1e-6;
    return r;
}

ladder_result survival_grid_converged(int N, int k, double tol, int M0, int M_max) {
    if (!(tol > 0.0)) throw std::invalid_argument("survival_grid_converged: tol must be > 0");
    if (M0 <= 0) M0 = default_grid(N);
    ladder_result r;
    int M = M0;
    double prev = survival_value(N, k, M);
    while (2 * M <= M_max) {
        M *= 2;
        ++r.doublings;
        const double cur = survival_value(N, k, M);
        const bool ok = prev > 0.0 && cur > 0.0 &&
                        std::abs(std::log(cur) - std::log(prev)) <= tol;
        prev = cur;
        if (ok) {
            r.converged = true;
            break;
        }
    }
    r.value = prev;
    r.final_M = M;
    return r;
}

grid_function iterate_d(double Lambda, int k, double s, int M) {
    if (!(Lambda > 0.0)) throw std::invalid_argument("iterate_d: Lambda must be > 0");
    if (k < 1) throw std::invalid_argument("iterate_d: k must be >= 1");
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("iterate_d: s must be in [0,1]");
    check_grid(M);
    const double h = 1.0 / M;
    grid_function out;
    out.grid_points = M;
    out.representation = grid_repr::raw_value;
    auto& d = out.values;
    d.resize(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i <= M; ++i)
        d[static_cast<std::size_t>(i)] = std::exp(Lambda * (i * h) * (s - 1.0));
    for (int step = 1; step < k; ++step) {
        std::vector<double> I = cumulative_trapezoid(d, h);
        for (int i = 0; i <= M; ++i) {
            const double x = i * h;
            double expo = -Lambda * (x - I[static_cast<std::size_t>(i)]);
            if (expo > 0.0) expo = 0.0;  // x - integral >= 0 up to rounding
            d[static_cast<std::size_t>(i)] = std::exp(expo);
        }
    }
    return out;
}

coupling_report check_coupling(int N, double Lambda, int k, double s, int M, double tol) {
    if (!(Lambda > 0.0 && Lambda <= static_cast<double>(N)))
        throw std::invalid_argument("check_coupling: need 0 < Lambda <= N");
    if (k < 1) throw std::invalid_argument("check_coupling: k must be >= 1");
    check_grid(M);
    const double h = 1.0 / M;
    const double c = Lambda / N;  // b = c * v substitution for the f side
    std::vector<double> f(static_cast<std::size_t>(M) + 1), d(static_cast<std::size_t>(M) + 1);
    coupling_report rep;
    rep.levels = k;
    for (int i = 0; i <= M; ++i) {
        const double v = i * h;
        f[static_cast<std::size_t>(i)] = std::pow(1.0 - c * v * (1.0 - s), N);
        d[static_cast<std::size_t>(i)] = std::exp(Lambda * v * (s - 1.0));
        rep.max_violation = std::max(
            rep.max_violation, f[static_cast<std::size_t>(i)] - d[static_cast<std::size_t>(i)]);
    }
    for (int level = 2; level <= k; ++level) {
        std::vector<double> If = cumulative_trapezoid(f, h);
        std::vector<double> Id = cumulative_trapezoid(d, h);
        for (int i = 0; i <= M; ++i) {
            const double v = i * h;
            double base = 1.0 - c * (v - If[static_cast<std::size_t>(i)]);
            base = std::clamp(base, 0.0, 1.0);
            f[static_cast<std::size_t>(i)] = std::pow(base, N);
            double expo = -Lambda * (v - Id[static_cast<std::size_t>(i)]);
            if (expo > 0.0) expo = 0.0;
            d[static_cast<std::size_t>(i)] = std::exp(expo);
            rep.max_violation = std::max(
                rep.max_violation,
                f[static_cast<std::size_t>(i)] - d[static_cast<std::size_t>(i)]);
        }
    }
    rep.pass = rep.max_violation <= tol;
    return rep;
}

f_limit_profile iterate_F(int k, int M, double z_max) {
    if (k < 0) throw std::invalid_argument("iterate_F: k must be >= 0");
    if (M < 4) throw std::invalid_argument("iterate_F: need >= 4 grid intervals");
    if (!(z_max > 0.0)) throw std::invalid_argument("iterate_F: z_max must be > 0");
    const double h = z_max / M;
    // Node j = 0 is z = 0, where F = 1 and the integrand limit is 1.
    std::vector<double> F(static_cast<std::size_t>(M) + 1);
    for (int j = 0; j <= M; ++j) F[static_cast<std::size_t>(j)] = std::exp(-j * h);
    std::vector<double> integrand(static_cast<std::size_t>(M) + 1);
    for (int it = 0; it < k; ++it) {
        integrand[0] = 1.0;  // (1 - F(u))/u -> -F'(0) = 1, every iteration
        for (int j = 1; j <= M; ++j)
            integrand[static_cast<std::size_t>(j)] =
                (1.0 - F[static_cast<std::size_t>(j)]) / (j * h);
        std::vector<double> cum = cumulative_order4(integrand, h);
        F[0] = 1.0;
        for (int j = 1; j <= M; ++j)
            F[static_cast<std::size_t>(j)] = std::exp(-cum[static_cast<std::size_t>(j)]);
    }
    f_limit_profile out;
    out.z.resize(static_cast<std::size_t>(M));
    out.F.resize(static_cast<std::size_t>(M));
    out.delta.resize(static_cast<std::size_t>(M));
    const double scale = std::ldexp(1.0, k);  // 2^k
    bool first = true;
    for (int j = 1; j <= M; ++j) {
        const double z = j * h;
        const double Fz = F[static_cast<std::size_t>(j)];
        const double del =
            scale * (1.0 + z) * (1.0 + z) * (1.0 + z) / (z * z) * (1.0 / (1.0 + z) - Fz);
        out.z[static_cast<std::size_t>(j - 1)] = z;
        out.F[static_cast<std::size_t>(j - 1)] = Fz;
        out.delta[static_cast<std::size_t>(j - 1)] = del;
        if (first) {
            out.delta_max = out.delta_min = del;
            first = false;
        } else {
            out.delta_max = std::max(out.delta_max, del);
            out.delta_min = std::min(out.delta_min, del);
        }
    }
    return out;
}

double delta0_bound(int M, double z_max) { return iterate_F(0, M, z_max).delta_max; }

double iterate_G(double mu, int k, int N, double lambda, int M) {
    if (!(mu >= 0.0)) throw std::invalid_argument("iterate_G: mu must be >= 0");
    if (k < 0 || N < 1) throw std::invalid_argument("iterate_G: need k >= 0, N >= 1");
    if (!(lambda >= 0.0 && lambda <= static_cast<double>(N)))
        throw std::invalid_argument("iterate_G: need 0 <= lambda <= N");
    if (M <= 0) M = default_grid(N);
    check_grid(M);
    const double x0 = lambda / N;
    const double h = (1.0 - x0) / M;
    if (!(h > 0.0)) return 1.0;  // x0 = 1: G = exp(0) = 1 for every k
    // Deficit D = 1 - G on the x-grid.
    std::vector<double> D(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i <= M; ++i) {
        const double x = x0 + i * h;
        const double p = x < 1.0 ? std::exp(N * std::log1p(-x)) : 0.0;  // (1-x)^N
        D[static_cast<std::size_t>(i)] = -std::expm1(-mu * p);
    }
    for (int it = 0; it < k; ++it) {
        std::vector<double> cum = cumulative_trapezoid(D, h);
        const double total = cum.back();
        for (int i = 0; i <= M; ++i) {
            double tail = total - cum[static_cast<std::size_t>(i)];  // integral_x^1 D
            tail = std::clamp(tail, 0.0, 1.0);
            // G = (1 - tail)^N, so D = 1 - (1-tail)^N.
            D[static_cast<std::size_t>(i)] = complement_power(tail, N);
        }
    }
    return 1.0 - D[0];
}

}  // namespace accper
