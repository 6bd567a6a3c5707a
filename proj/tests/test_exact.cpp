#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "accper/exact.hpp"
#include "oracle_rational.hpp"

using namespace accper;

namespace {

double rel_err(double got, double want) {
    if (want == 0.0) return std::fabs(got);
    return std::fabs(got - want) / std::fabs(want);
}

std::vector<oracle::rat> phi_profile(int k, int J) {
    std::vector<oracle::rat> lower;
    for (int j = 1; j <= k; ++j) lower.push_back(oracle::rat(j, J));
    return lower;
}

std::vector<oracle::rat> psi_profile(int k, int J, const oracle::rat& eps) {
    std::vector<oracle::rat> lower;
    for (int j = 1; j <= k; ++j) lower.push_back(eps + (1 - eps) * oracle::rat(j - 1, J));
    return lower;
}

path_bound_profile to_double_profile(const std::vector<oracle::rat>& lower) {
    path_bound_profile p;
    for (const auto& l : lower) p.lower.push_back(oracle::to_double(l));
    return p;
}

}  // namespace

TEST_CASE("phi closed form matches the rational volume oracle") {
    CHECK(phi(3, 5) == doctest::Approx(1.0 / 15.0).epsilon(1e-14));
    for (int J = 2; J <= 8; ++J) {
        for (int k = 1; k < J; ++k) {
            const double want = oracle::to_double(oracle::path_prob(phi_profile(k, J), 1));
            CHECK(rel_err(phi(k, J), want) <= 1e-12);
            CHECK(rel_err(oracle::to_double(oracle::phi_exact(k, J)), want) <= 1e-15);
        }
    }
    CHECK_THROWS_AS(phi(5, 5), std::domain_error);
    CHECK_THROWS_AS(phi(0, 3), std::domain_error);
}

TEST_CASE("psi closed form matches the rational volume oracle") {
    CHECK(psi(2, 3, 0.0) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    const oracle::rat eps_values[] = {oracle::rat(0), oracle::rat(3, 10), oracle::rat(3, 5)};
    for (int J = 2; J <= 8; ++J) {
        for (int k = 1; k <= J; ++k) {
            for (const auto& eps : eps_values) {
                const double want =
                    oracle::to_double(oracle::path_prob(psi_profile(k, J, eps), 1));
                CHECK(rel_err(psi(k, J, oracle::to_double(eps)), want) <= 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(psi(4, 3, 0.0), std::domain_error);
    CHECK_THROWS_AS(psi(2, 3, 1.0), std::domain_error);
    CHECK_THROWS_AS(psi(2, 3, -0.1), std::domain_error);
}

TEST_CASE("psi at eps = 1/(J+1) collapses to phi with cap J+1") {
    for (int J = 2; J <= 8; ++J)
        for (int k = 1; k <= J; ++k)
            CHECK(rel_err(psi(k, J, 1.0 / (J + 1)), phi(k, J + 1)) <= 1e-12);
}

TEST_CASE("increasing_path_prob agrees with the oracle on generic profiles") {
    // Mixed-feasibility profiles exercise clamping, caps and piece bookkeeping.
    struct probe {
        std::vector<oracle::rat> lower;
        oracle::rat cap;
    };
    std::vector<probe> probes = {
        {{oracle::rat(0), oracle::rat(0)}, oracle::rat(1, 2)},
        {{oracle::rat(-1, 4), oracle::rat(1, 3)}, oracle::rat(1)},
        {{oracle::rat(1, 5), oracle::rat(2, 5), oracle::rat(3, 5), oracle::rat(4, 5)},
         oracle::rat(1)},
        {{oracle::rat(1, 2), oracle::rat(1, 7), oracle::rat(5, 7)}, oracle::rat(9, 10)},
        {{oracle::rat(0), oracle::rat(0), oracle::rat(0), oracle::rat(0), oracle::rat(0)},
         oracle::rat(1)},
    };
    for (const auto& pr : probes) {
        auto p = to_double_profile(pr.lower);
        p.upper_cap = oracle::to_double(pr.cap);
        const double want = oracle::to_double(oracle::path_prob(pr.lower, pr.cap));
        CHECK(rel_err(increasing_path_prob(p), want) <= 1e-12);
    }
    // Uncapped k-chain with zero lowers is 1/k!.
    path_bound_profile basic;
    basic.lower.assign(4, 0.0);
    CHECK(rel_err(increasing_path_prob(basic), 1.0 / 24.0) <= 1e-13);
    // Infeasible coordinate above the cap.
    path_bound_profile bad;
    bad.lower = {0.2, 0.9};
    bad.upper_cap = 0.5;
    CHECK(increasing_path_prob(bad) == 0.0);
    path_bound_profile empty;
    CHECK_THROWS_AS(increasing_path_prob(empty), std::domain_error);
}

TEST_CASE("prob_A special values and monotonicity") {
    // L = 0 keeps every constraint active (lower_j = j/(K+1)); the closed
    // value is exactly 1/(K+1)!.
    for (int K = 1; K <= 8; ++K) {
        double f = 1.0;
        for (int i = 2; i <= K + 1; ++i) f *= i;
        CHECK(rel_err(prob_A(0, K), 1.0 / f) <= 1e-12);
    }
    CHECK(prob_A(1, 4) == doctest::Approx(0.0288).epsilon(1e-12));
    for (int K = 2; K <= 7; ++K) {
        CHECK(rel_err(prob_A(1, K), psi(K, K + 1, 0.0)) <= 1e-12);
        for (int L = 1; L < K; ++L) {
            CHECK(prob_A(L, K) >= prob_A(L - 1, K));  // relaxing constraints
            // Oracle cross-check of the profile (j-L)_+/(K+1).
            std::vector<oracle::rat> lower;
            for (int j = 1; j <= K; ++j)
                lower.push_back(j > L ? oracle::rat(j - L, K + 1) : oracle::rat(0));
            const double want = oracle::to_double(oracle::path_prob(lower, 1));
            CHECK(rel_err(prob_A(L, K), want) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(prob_A(-1, 4), std::domain_error);
    CHECK_THROWS_AS(prob_A(4, 4), std::domain_error);
}

TEST_CASE("u_bound formula value and dominance over the exact volume") {
    CHECK(u_bound(2, 5) == doctest::Approx(35.6543713257494).epsilon(1e-12));
    for (int k = 1; k <= 9; ++k) {
        for (int i = 1; i <= k; ++i) {
            std::vector<oracle::rat> lower;
            for (int j = 1; j <= k; ++j)
                lower.push_back(j > i ? oracle::rat(j - i, k - i + 1) : oracle::rat(0));
            const double exact_log =
                std::log(oracle::to_double(oracle::path_prob(lower, 1)));
            CHECK(u_bound(i, k) >= exact_log);
        }
    }
    CHECK_THROWS_AS(u_bound(0, 3), std::domain_error);
    CHECK_THROWS_AS(u_bound(4, 3), std::domain_error);
}

TEST_CASE("bound_A dominates the exact log probability") {
    // At L = 1 the bound degenerates to the exact value, so equality holds to
    // roundoff; above that it is strictly larger.
    for (int K = 3; K <= 8; ++K)
        for (int L = 1; L < K; ++L)
            CHECK(bound_A(L, K) >= std::log(prob_A(L, K)) - 1e-12);
    CHECK_THROWS_AS(bound_A(0, 4), std::domain_error);
}

TEST_CASE("mean of Z and the uniform-root variant") {
    CHECK(mean_Z(2, 2, 0.0).log_mean == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(mean_Z_uniform_root(3, 2) == doctest::Approx(std::log(1.5)).epsilon(1e-13));
    // Tilted-root identity: E_x[Z_{N,N}] / E_0[Z_{N,N}] = (1-x)^N at x=lambda/N.
    const int N = 14;
    const double x = 1.0 / 14.0;
    const double got = std::exp(mean_Z(N, N, x).log_mean - mean_Z(N, N, 0.0).log_mean);
    CHECK(rel_err(got, std::pow(1.0 - x, N)) <= 1e-12);
    CHECK(std::isinf(mean_Z(3, 3, 1.0).log_mean));
    CHECK_THROWS_AS(mean_Z(0, 2, 0.0), std::domain_error);
    CHECK_THROWS_AS(mean_Z(2, 2, 1.5), std::domain_error);
}

TEST_CASE("second moment of Z: exact small case and frozen ratios") {
    const auto m22 = second_moment_Z(2, 2, 0.0);
    CHECK(std::exp(m22.log_second_moment) == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
    CHECK(m22.normalized_second_moment == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(second_moment_Z(14, 14, 0.0).normalized_second_moment ==
          doctest::Approx(1.866002908347678).epsilon(1e-10));
    CHECK(second_moment_Z(400, 400, 0.0).normalized_second_moment ==
          doctest::Approx(1.995012407866422).epsilon(1e-10));
    for (int N : {2, 5, 10})
        for (int k : {1, 2, 3, 4, 5, 6})
            for (double x : {0.0, 0.3})
                CHECK(second_moment_Z(N, k, x).normalized_second_moment >= 1.0);
    CHECK_THROWS_AS(second_moment_Z(2, 2, 1.0), std::domain_error);
}

TEST_CASE("theta frozen values") {
    CHECK(theta(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(theta(std::exp(1.0))) <= 1e-15);
    CHECK(theta(2.0) == doctest::Approx(0.613705638880109).epsilon(1e-12));
    CHECK(theta(3.0) == doctest::Approx(-0.295836866004329).epsilon(1e-12));
    CHECK(theta(4.0) == doctest::Approx(-1.545177444479562).epsilon(1e-12));
    CHECK(theta(std::exp(1.0) - 0.01) == doctest::Approx(0.009981583430480).epsilon(1e-9));
    CHECK_THROWS_AS(theta(0.0), std::domain_error);
}

TEST_CASE("integer generation conventions") {
    CHECK(k_of_alpha(3.0, 100) == 300);
    CHECK(k_of_alpha(std::exp(1.0), 10) == 27);
    // 1.4 * 45 rounds to 62.99999999999999 in binary; the floor guard must
    // still produce the mathematically exact 63.
    CHECK(k_of_alpha(1.4, 45) == 63);
    CHECK(k_of_window(3.0, 100) == 258);
    CHECK(k_of_window(0.0, 10) == 27);
}
