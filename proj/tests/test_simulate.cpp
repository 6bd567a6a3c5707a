#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "accper/exact.hpp"
#include "accper/rng.hpp"
#include "accper/simulate.hpp"
#include "accper/stats.hpp"

using namespace accper;

namespace {

count_histogram histogram_from_final_counts(const branching_config& cfg, long long reps) {
    count_histogram h;
    for (long long r = 0; r < reps; ++r) {
        auto fc = sample_final_count(cfg, static_cast<std::uint64_t>(r));
        if (fc.truncated) {
            ++h.truncated;
            continue;
        }
        if (static_cast<std::size_t>(fc.count) >= h.freq.size())
            h.freq.resize(static_cast<std::size_t>(fc.count) + 1, 0);
        ++h.freq[static_cast<std::size_t>(fc.count)];
    }
    return h;
}

}  // namespace

TEST_CASE("rng streams are reproducible and replicate-independent") {
    auto a = stream_for(42, 7);
    auto b = stream_for(42, 7);
    auto c = stream_for(42, 8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next(), y = b.next(), z = c.next();
        all_equal = all_equal && (x == y);
        any_diff = any_diff || (x != z);
    }
    CHECK(all_equal);
    CHECK(any_diff);
    auto g = stream_for(1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = g.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("binomial_draw distribution: direct and symmetry-flipped branches") {
    auto run = [](int n, double p, std::uint64_t seed) {
        auto g = stream_for(seed, 0);
        std::vector<long long> counts(static_cast<std::size_t>(n) + 1, 0);
        const int reps = 50000;
        for (int i = 0; i < reps; ++i) ++counts[static_cast<std::size_t>(binomial_draw(g, n, p))];
        std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
        double pmf = std::pow(1.0 - p, n);
        for (int j = 0; j <= n; ++j) {
            probs[static_cast<std::size_t>(j)] = pmf;
            pmf *= (p / (1.0 - p)) * static_cast<double>(n - j) / static_cast<double>(j + 1);
        }
        return chi_square_gof(counts, probs);
    };
    CHECK(run(10, 0.3, 1001).p_value >= 0.01);
    CHECK(run(10, 0.7, 1002).p_value >= 0.01);  // p > 1/2 goes through the flip
    CHECK(run(64, 0.02, 1003).p_value >= 0.01);
    auto g = stream_for(5, 0);
    CHECK(binomial_draw(g, 10, 0.0) == 0);
    CHECK(binomial_draw(g, 10, 1.0) == 10);
    CHECK(binomial_draw(g, 0, 0.5) == 0);
}

TEST_CASE("poisson_draw distribution: inversion branch and recursive halving") {
    auto g = stream_for(2024, 0);
    std::vector<long long> counts(16, 0);
    const int reps = 50000;
    for (int i = 0; i < reps; ++i) {
        const long long v = poisson_draw(g, 2.5);
        if (v < 15)
            ++counts[static_cast<std::size_t>(v)];
        else
            ++counts[15];
    }
    std::vector<double> probs(16, 0.0);
    double pmf = std::exp(-2.5);
    for (int j = 0; j < 15; ++j) {
        probs[static_cast<std::size_t>(j)] = pmf;
        pmf *= 2.5 / static_cast<double>(j + 1);
    }
    CHECK(chi_square_gof(counts, probs).p_value >= 0.01);
    // Large rate splits recursively; check the first two moments.
    std::vector<double> big;
    for (int i = 0; i < 20000; ++i) big.push_back(static_cast<double>(poisson_draw(g, 70.0)));
    const auto ms = sample_mean_se(big);
    CHECK(std::fabs(ms.mean - 70.0) <= 3.0 * ms.se);
    CHECK(poisson_draw(g, 0.0) == 0);
}

TEST_CASE("one generation from root fitness zero is always full") {
    branching_config cfg;
    cfg.N = 3;
    cfg.k = 1;
    cfg.seed = 11;
    for (std::uint64_t r = 0; r < 20; ++r) {
        auto s = sample_population(cfg, r);
        REQUIRE(s.counts_per_generation.size() == 2);
        CHECK(s.counts_per_generation[0] == 1);
        CHECK(s.counts_per_generation[1] == 3);
        CHECK(s.front_fitnesses.size() == 3);
        for (double v : s.front_fitnesses) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
        CHECK_FALSE(s.truncated);
    }
}

TEST_CASE("population moments at N=2, k=2 match the exact values") {
    branching_config cfg;
    cfg.N = 2;
    cfg.k = 2;
    cfg.seed = 4242;
    const long long reps = 20000;
    std::vector<double> zs, z2s;
    for (long long r = 0; r < reps; ++r) {
        auto s = sample_population(cfg, static_cast<std::uint64_t>(r));
        const double z = static_cast<double>(s.counts_per_generation.back());
        zs.push_back(z);
        z2s.push_back(z * z);
    }
    const auto m1 = sample_mean_se(zs);
    const auto m2 = sample_mean_se(z2s);
    CHECK(std::fabs(m1.mean - 2.0) <= 3.0 * m1.se);
    CHECK(std::fabs(m2.mean - 16.0 / 3.0) <= 3.0 * m2.se);
}

TEST_CASE("sampler determinism and truncation flagging") {
    branching_config cfg;
    cfg.N = 4;
    cfg.k = 6;
    cfg.seed = 99;
    auto a = sample_population(cfg, 3);
    auto b = sample_population(cfg, 3);
    CHECK(a.counts_per_generation == b.counts_per_generation);
    CHECK(a.front_fitnesses == b.front_fitnesses);

    cfg.population_cap = 5;
    bool saw_truncation = false;
    for (std::uint64_t r = 0; r < 50 && !saw_truncation; ++r) {
        auto s = sample_population(cfg, r);
        if (s.truncated) {
            saw_truncation = true;
            CHECK(s.front_fitnesses.empty());
            CHECK(s.counts_per_generation.back() > 5);
        }
    }
    CHECK(saw_truncation);
}

TEST_CASE("depth-first final count has the same law as the level sampler") {
    branching_config cfg;
    cfg.N = 3;
    cfg.k = 2;
    cfg.seed = 7001;
    auto bfs = population_histogram(cfg, 30000, 0);
    cfg.seed = 7002;
    auto dfs = histogram_from_final_counts(cfg, 30000);
    const std::size_t w = std::max(bfs.freq.size(), dfs.freq.size());
    bfs.freq.resize(w, 0);
    dfs.freq.resize(w, 0);
    const auto res = chi_square_two_sample(bfs.freq, dfs.freq);
    CHECK(res.p_value >= 0.005);
}

TEST_CASE("branching sampler agrees with the explicit-tree oracle") {
    const long long reps = 20000;
    auto brute = brute_force_tree(3, 2, 0.3, reps, 5150);
    branching_config cfg;
    cfg.N = 3;
    cfg.k = 2;
    cfg.root_fitness = 0.3;
    cfg.seed = 5151;
    auto sim = population_histogram(cfg, reps, 0);
    const std::size_t w = std::max(brute.freq.size(), sim.freq.size());
    brute.freq.resize(w, 0);
    sim.freq.resize(w, 0);
    const auto res = chi_square_two_sample(brute.freq, sim.freq);
    CHECK(res.p_value >= 0.005);
}

TEST_CASE("explicit-tree oracle basics") {
    auto h = brute_force_tree(2, 1, 0.0, 500, 31);
    REQUIRE(h.freq.size() == 3);
    CHECK(h.freq[2] == 500);  // both depth-1 children beat fitness 0 a.s.
    CHECK(h.truncated == 0);

    // Root 0.5, depth 1: Z ~ Binomial(2, 1/2).
    auto b = brute_force_tree(2, 1, 0.5, 40000, 32);
    CHECK(chi_square_gof(b.freq, {0.25, 0.5, 0.25}).p_value >= 0.01);

    // Depth-2 mean under the exact value 2.
    auto d2 = brute_force_tree(2, 2, 0.0, 40000, 33);
    double tot = 0.0, n = 0.0;
    for (std::size_t z = 0; z < d2.freq.size(); ++z) {
        tot += static_cast<double>(z) * static_cast<double>(d2.freq[z]);
        n += static_cast<double>(d2.freq[z]);
    }
    CHECK(d2.freq.size() <= 5);  // at most 4 leaves
    CHECK(tot / n == doctest::Approx(2.0).epsilon(0.03));

    CHECK_THROWS_AS(brute_force_tree(5, 6, 0.0, 10, 1), std::invalid_argument);
}

TEST_CASE("survival estimator: exact cases and solver agreement") {
    branching_config cfg;
    cfg.N = 6;
    cfg.k = 1;
    cfg.seed = 8;
    auto one = estimate_survival(cfg, 500);
    CHECK(one.p_hat == 1.0);
    CHECK(one.ci_halfwidth_95 == 0.0);

    cfg.N = 2;
    cfg.k = 2;
    cfg.seed = 606;
    auto s = estimate_survival(cfg, 40000);
    CHECK(std::fabs(s.p_hat - 8.0 / 9.0) <= 0.006);
    CHECK(s.replicates == 40000);

    CHECK_THROWS_AS(estimate_survival(cfg, 0), std::invalid_argument);
}

TEST_CASE("survival estimator near the critical depth") {
    branching_config cfg;
    cfg.N = 10;
    cfg.k = 27;  // floor(e*10)
    cfg.seed = 2718;
    auto s = estimate_survival(cfg, 100000);
    // Grid-converged solver value is 0.023170.
    CHECK(s.p_hat >= 0.018);
    CHECK(s.p_hat <= 0.028);
}

TEST_CASE("survival estimate is bit-identical across thread counts") {
    branching_config cfg;
    cfg.N = 3;
    cfg.k = 8;
    cfg.seed = 777;
    auto t1 = estimate_survival(cfg, 4000, 1);
    auto t4 = estimate_survival(cfg, 4000, 4);
    auto t8 = estimate_survival(cfg, 4000, 8);
    CHECK(t1.p_hat == t4.p_hat);
    CHECK(t1.p_hat == t8.p_hat);
    auto h1 = population_histogram(cfg, 300, 1);
    auto h8 = population_histogram(cfg, 300, 8);
    CHECK(h1.freq == h8.freq);
    CHECK(h1.truncated == h8.truncated);
}

TEST_CASE("window shifts the law, not just the mean") {
    branching_config shifted;
    shifted.N = 3;
    shifted.k = 2;
    shifted.window = {{0.2, 0.7}};
    shifted.root_fitness = 0.3;
    shifted.seed = 1201;
    branching_config base;
    base.N = 3;
    base.k = 2;
    base.window = {{0.0, 0.5}};
    base.root_fitness = 0.1;
    base.seed = 1202;
    auto hs = population_histogram(shifted, 20000, 0);
    auto hb = population_histogram(base, 20000, 0);
    const std::size_t w = std::max(hs.freq.size(), hb.freq.size());
    hs.freq.resize(w, 0);
    hb.freq.resize(w, 0);
    CHECK(chi_square_two_sample(hs.freq, hb.freq).p_value >= 0.005);

    // Depth-1 mean: Binomial(N, b - max(root, a)) has mean N*0.4 here.
    branching_config m;
    m.N = 5;
    m.k = 1;
    m.window = {{0.2, 0.7}};
    m.root_fitness = 0.3;
    m.seed = 1203;
    std::vector<double> cs;
    for (int r = 0; r < 20000; ++r)
        cs.push_back(static_cast<double>(
            sample_population(m, static_cast<std::uint64_t>(r)).counts_per_generation[1]));
    const auto ms = sample_mean_se(cs);
    CHECK(std::fabs(ms.mean - 5.0 * 0.4) <= 3.0 * ms.se);

    // A root above the window upper edge cannot reproduce.
    branching_config dead;
    dead.N = 4;
    dead.k = 1;
    dead.window = {{0.2, 0.7}};
    dead.root_fitness = 0.9;
    dead.seed = 1;
    CHECK(sample_population(dead, 0).counts_per_generation[1] == 0);

    branching_config bad;
    bad.window = {{0.5, 0.5}};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad.window = {{-0.1, 0.5}};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad.window = {{0.1, 1.5}};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("tilted corridor mean matches N^k psi(k,k,eps)") {
    const int N = 3, k = 3;
    const double eps = 0.2;
    branching_config cfg;
    cfg.N = N;
    cfg.k = k;
    cfg.seed = 909;
    std::vector<double> llb(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i)
        llb[static_cast<std::size_t>(i - 1)] = eps + (1.0 - eps) * (i - 1.0) / k;
    cfg.level_lower_bounds = llb;
    std::vector<double> zs;
    for (int r = 0; r < 20000; ++r)
        zs.push_back(static_cast<double>(
            sample_population(cfg, static_cast<std::uint64_t>(r)).counts_per_generation.back()));
    const auto ms = sample_mean_se(zs);
    const double want = std::pow(3.0, 3) * psi(k, k, eps);  // 1.365333...
    CHECK(std::fabs(ms.mean - want) <= 3.0 * ms.se);

    branching_config bad = cfg;
    bad.level_lower_bounds = std::vector<double>{0.2, 0.4};  // wrong length
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad.level_lower_bounds = std::vector<double>{0.2, 0.4, 1.2};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("decreasing Poisson chain") {
    // Fitness 0 spawns nothing.
    auto empty = sample_poisson_decreasing(4.0, 2, 0.0, 17);
    for (std::size_t t = 1; t < empty.counts_per_generation.size(); ++t)
        CHECK(empty.counts_per_generation[t] == 0);

    // Depth-1 mean Lambda * x.
    std::vector<double> cs;
    std::vector<long long> hist;
    for (int r = 0; r < 10000; ++r) {
        auto s = sample_poisson_decreasing(4.0, 1, 0.5, 404, static_cast<std::uint64_t>(r));
        const long long c = s.counts_per_generation[1];
        cs.push_back(static_cast<double>(c));
        const std::size_t bin = static_cast<std::size_t>(std::min<long long>(c, 12));
        if (bin >= hist.size()) hist.resize(bin + 1, 0);
        ++hist[bin];
        for (double v : s.front_fitnesses) {
            CHECK(v >= 0.0);
            CHECK(v < 0.5);  // strictly decreasing labels
        }
    }
    const auto ms = sample_mean_se(cs);
    CHECK(std::fabs(ms.mean - 2.0) <= 3.0 * ms.se);
    std::vector<double> probs(hist.size(), 0.0);
    double pmf = std::exp(-2.0);
    for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
        probs[j] = pmf;
        pmf *= 2.0 / static_cast<double>(j + 1);
    }
    CHECK(chi_square_gof(hist, probs).p_value >= 0.01);
    CHECK_THROWS_AS(sample_poisson_decreasing(0.0, 2, 0.5, 1), std::invalid_argument);
}

TEST_CASE("config validation rejects out-of-range fields") {
    branching_config bad;
    bad.N = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = branching_config{};
    bad.k = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = branching_config{};
    bad.root_fitness = 1.0001;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = branching_config{};
    bad.population_cap = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
