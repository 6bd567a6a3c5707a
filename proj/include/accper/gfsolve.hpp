#pragma once

// Grid iteration of the generating-function recursions: the N-ary chain
// f_k(s, b), its Poisson analogue d_k(s, x), the coupling inequality between
// them, and the two limit recursions F_k(z) and G_k(mu, x, N).
//
// Survival quantities are always iterated in survival-complement form
// (g = 1 - f); the naive form loses all precision the moment f is within
// 1e-16 of 1, which happens immediately in the subcritical regime.

#include <cstdint>
#include <vector>

namespace accper {

enum class grid_repr { raw_value, survival_complement };

struct grid_function {
    int grid_points = 0;              // M; values live on b = i/M, i = 0..M
    std::vector<double> values;       // size M+1
    grid_repr representation = grid_repr::raw_value;
    double doubling_rel_change = 0.0; // relative disagreement of the M vs 2M runs
    bool precision_warning = false;   // doubling disagreement above 1e-6 relative
};

inline int default_grid(int N) { return 4096 > 16 * N ? 4096 : 16 * N; }

// f_k(s, .) on a uniform b-grid. s = 0 runs in survival-complement form
// (values hold g = 1 - f). The returned function carries a grid-doubling
// diagnostic evaluated at b = 1.
grid_function iterate_f(int N, int k, double s, int M);

struct survival_result {
    double value = 0.0;                // P(Z >= 1 | root fitness 0) at grid M
    double doubling_rel_change = 0.0;
    bool precision_warning = false;
    int grid_points = 0;
};

// Survival probability after k generations from root fitness 0, with the
// doubling check M -> 2M (warns above 1e-6 relative). M <= 0 picks
// default_grid(N).
survival_result survival_prob(int N, int k, int M = 0);

// Single-grid evaluation without the doubling diagnostic (building block for
// refinement ladders; survival_prob wraps it).
double survival_value(int N, int k, int M);

struct ladder_result {
    double value = 0.0;   // survival at the finest grid reached
    int final_M = 0;
    int doublings = 0;
    bool converged = false;  // |delta log value| <= tol at the last doubling
};

// Doubles the grid until consecutive survivals agree within tol in log
// scale. Near k ~ e*N the default grid is far from converged, so experiment
// runners must use this rather than a fixed M.
ladder_result survival_grid_converged(int N, int k, double tol, int M0 = 0,
                                      int M_max = 1 << 23);

// d_k(s, .) on a uniform x-grid: d_1 = exp(Lambda x (s-1)),
// d_{k+1} = exp(-Lambda (x - integral_0^x d_k)). Values in (0, 1].
grid_function iterate_d(double Lambda, int k, double s, int M);

struct coupling_report {
    bool pass = false;
    double max_violation = 0.0;  // max over levels 1..k and grid of f - d
    int levels = 0;
};

// Verifies f_k(s, (Lambda/N) u) <= d_k(s, u) for all levels up to k. The f
// side is iterated directly on the substituted variable b = (Lambda/N) v so
// both sides share one grid exactly; no interpolation error enters.
coupling_report check_coupling(int N, double Lambda, int k, double s, int M,
                               double tol = 1e-8);

struct f_limit_profile {
    std::vector<double> z;      // strictly positive nodes j*h, j = 1..M
    std::vector<double> F;      // F_k at those nodes
    std::vector<double> delta;  // 2^k (1+z)^3/z^2 (1/(1+z) - F_k)
    double delta_max = 0.0;
    double delta_min = 0.0;
};

// F_0 = exp(-z); F_{k+1}(z) = exp(-integral_0^z (1-F_k(u))/u du). The
// integrand at u = 0 equals 1 exactly in every iteration (the slope
// invariant F_k'(0) = -1), and the cumulative integral uses the 4th-order
// rule: trapezoid error near 0 would be amplified by 2^k/z^2 in delta.
f_limit_profile iterate_F(int k, int M = 16384, double z_max = 50.0);

// Empirical bound constant: max over the grid of delta at k = 0.
double delta0_bound(int M = 16384, double z_max = 50.0);

// G_0(mu, x, N) = exp(-mu (1-x)^N); G_{k+1} = (x + integral_x^1 G_k)^N,
// iterated in deficit form D = 1 - G with the base computed as
// 1 - integral_x^1 D (the raw form is violently unstable). Returns the value
// at x = lambda/N. M <= 0 picks default_grid(N).
double iterate_G(double mu, int k, int N, double lambda, int M = 0);

}  // namespace accper
