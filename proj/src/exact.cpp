#include "accper/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "accper/logprob.hpp"

namespace accper {

namespace {

double log_psi(int k, int j_cap, double eps) {
    const double J = static_cast<double>(j_cap);
    return k * std::log1p(1.0 / J) + std::log(J + 1.0 - k) - log_factorial(k) -
           std::log(J + 1.0) + k * std::log1p(-eps);
}

// Piecewise polynomial on consecutive intervals [cut[i], cut[i+1]] with
// power-basis coefficients around 0.
struct piecewise {
    std::vector<double> cuts;                 // size m+1
    std::vector<std::vector<double>> coeffs;  // size m

    double eval(std::size_t piece, double t) const {
        const auto& c = coeffs[piece];
        double r = 0.0;
        for (std::size_t d = c.size(); d-- > 0;) r = r * t + c[d];
        return r;
    }
};

std::vector<double> antiderivative(const std::vector<double>& c) {
    std::vector<double> a(c.size() + 1, 0.0);
    for (std::size_t d = 0; d < c.size(); ++d) a[d + 1] = c[d] / static_cast<double>(d + 1);
    return a;
}

double eval_poly(const std::vector<double>& c, double t) {
    double r = 0.0;
    for (std::size_t d = c.size(); d-- > 0;) r = r * t + c[d];
    return r;
}

}  // namespace

double phi(int k, int j_cap) {
    if (k < 1 || k >= j_cap) throw std::domain_error("phi: need 1 <= k < J");
    const double J = static_cast<double>(j_cap);
    return std::exp(std::log(J - k) - log_factorial(k) - std::log(J));
}

double psi(int k, int j_cap, double eps) {
    if (k < 1 || k > j_cap) throw std::domain_error("psi: need 1 <= k <= J");
    if (!(eps >= 0.0 && eps < 1.0)) throw std::domain_error("psi: need 0 <= eps < 1");
    return std::exp(log_psi(k, j_cap, eps));
}

double increasing_path_prob(const path_bound_profile& profile) {
    const std::size_t k = profile.lower.size();
    if (k < 1) throw std::domain_error("increasing_path_prob: profile length must be >= 1");
    const double cap = profile.upper_cap.value_or(1.0);
    if (cap <= 0.0) return 0.0;

    // Breakpoints: 0, the clamped lower bounds, cap.
    std::vector<double> cuts{0.0};
    for (double b : profile.lower) cuts.push_back(std::clamp(b, 0.0, cap));
    cuts.push_back(cap);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const std::size_t m = cuts.size() - 1;

    piecewise F;
    F.cuts = cuts;
    F.coeffs.assign(m, {1.0});  // F_0 == 1

    for (std::size_t j = 0; j < k; ++j) {
        const double b = std::clamp(profile.lower[j], 0.0, cap);
        if (profile.lower[j] > cap) return 0.0;  // coordinate cannot satisfy b_j <= u_j <= cap
        std::vector<std::vector<double>> next(m);
        double carry = 0.0;  // integral accumulated up to the current cut
        bool started = false;
        for (std::size_t p = 0; p < m; ++p) {
            const double lo = F.cuts[p], hi = F.cuts[p + 1];
            if (hi <= b) {
                next[p] = {0.0};
                continue;
            }
            const double from = started ? lo : b;
            std::vector<double> A = antiderivative(F.coeffs[p]);
            // Piece polynomial: carry + A(t) - A(from).
            A[0] += carry - eval_poly(A, from);
            next[p] = A;
            carry = eval_poly(next[p], hi);
            started = true;
        }
        F.coeffs = std::move(next);
    }
    double v = F.eval(m - 1, cap);
    return v > 0.0 ? v : 0.0;
}

double prob_A(int L, int K) {
    if (L < 0 || L >= K) throw std::domain_error("prob_A: need 0 <= L < K");
    path_bound_profile p;
    p.lower.resize(static_cast<std::size_t>(K));
    for (int j = 1; j <= K; ++j)
        p.lower[static_cast<std::size_t>(j - 1)] =
            j > L ? static_cast<double>(j - L) / static_cast<double>(K + 1) : 0.0;
    return increasing_path_prob(p);
}

double u_bound(int i, int k) {
    if (i < 1 || k < i) throw std::domain_error("u_bound: need k >= i >= 1");
    const double c1 = 40.0;
    return static_cast<double>(k - i) + c1 * std::sqrt(static_cast<double>(i - 1)) + 2.0 -
           k * std::log(static_cast<double>(k + 1 - i)) - 1.5 * std::log(static_cast<double>(k));
}

double bound_A(int L, int K) {
    if (L < 1 || L >= K) throw std::domain_error("bound_A: need 1 <= L < K");
    std::vector<double> terms;
    terms.push_back(log_psi(K, K + 1, 0.0));  // exact P[A_1(K)]
    for (int i = 1; i <= L - 1; ++i) {
        for (int k = i + 1; k <= K; ++k) {
            const double log_q =
                (K - k) * std::log(static_cast<double>(K + 2 + i - k) / (K + 1)) +
                std::log(static_cast<double>(i + 2)) - log_factorial(K - k) -
                std::log(static_cast<double>(K - k + i + 2));
            const double log_p =
                k * std::log(static_cast<double>(k - i) / (K + 1)) -
                std::log(static_cast<double>(k - i)) + u_bound(i, k - 1);
            terms.push_back(log_q + log_p);
        }
    }
    return log_sum_exp(terms);
}

moment_summary mean_Z(int N, int k, double x) {
    if (N < 1 || k < 1) throw std::domain_error("mean_Z: need N >= 1, k >= 1");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("mean_Z: x must be in [0,1]");
    moment_summary m;
    m.log_mean = x >= 1.0 ? neg_inf
                          : k * std::log(static_cast<double>(N)) + k * std::log1p(-x) -
                                log_factorial(k);
    return m;
}

double mean_Z_uniform_root(int N, int k) {
    if (N < 1 || k < 1) throw std::domain_error("mean_Z_uniform_root: need N >= 1, k >= 1");
    return k * std::log(static_cast<double>(N)) - log_factorial(k + 1);
}

moment_summary second_moment_Z(int N, int k, double x) {
    if (N < 1 || k < 1) throw std::domain_error("second_moment_Z: need N >= 1, k >= 1");
    if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("second_moment_Z: x must be in [0,1)");
    const double log_m = mean_Z(N, k, x).log_mean;
    const double log_nf = std::log(static_cast<double>(N - 1)) - std::log(static_cast<double>(N));
    std::vector<double> terms;
    terms.push_back(log_m);  // diagonal
    if (N > 1) {
        for (int q = 0; q < k; ++q) {
            const double log_a = log_factorial(2 * k - 2 * q) + 2.0 * log_factorial(k) -
                                 q * (std::log(static_cast<double>(N)) + std::log1p(-x)) -
                                 log_factorial(2 * k - q) - 2.0 * log_factorial(k - q);
            terms.push_back(2.0 * log_m + log_nf + log_a);
        }
    }
    moment_summary m;
    m.log_mean = log_m;
    m.log_second_moment = log_sum_exp(terms);
    m.normalized_second_moment = std::exp(m.log_second_moment - 2.0 * log_m);
    return m;
}

double theta(double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("theta: alpha must be > 0");
    return alpha * (1.0 - std::log(alpha));
}

int k_of_alpha(double alpha, int N) {
    // +1e-9 absorbs binary-representation droop of products like 0.3*10.
    return static_cast<int>(std::floor(alpha * static_cast<double>(N) + 1e-9));
}

int k_of_window(double beta, int N) {
    const double e = 2.718281828459045235360287471352662498;
    return static_cast<int>(std::llround(e * N - beta * std::log(static_cast<double>(N))));
}

}  // namespace accper
