#include "accper/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "accper/parallel.hpp"
#include "accper/rng.hpp"

namespace accper {

namespace {

struct run_bounds {
    double a, b;
    const std::vector<double>* level_lower;  // may be null

    double threshold(double v, int next_level) const {
        double thr = v > a ? v : a;
        if (level_lower) {
            const double l = (*level_lower)[static_cast<std::size_t>(next_level - 1)];
            if (l > thr) thr = l;
        }
        return thr;
    }
};

run_bounds bounds_of(const branching_config& cfg) {
    run_bounds rb{0.0, 1.0, nullptr};
    if (cfg.window) {
        rb.a = cfg.window->first;
        rb.b = cfg.window->second;
    }
    if (cfg.level_lower_bounds) rb.level_lower = &*cfg.level_lower_bounds;
    return rb;
}

}  // namespace

void validate(const branching_config& cfg) {
    if (cfg.N < 1) throw std::invalid_argument("branching_config: N must be >= 1");
    if (cfg.k < 1) throw std::invalid_argument("branching_config: k must be >= 1");
    if (!(cfg.root_fitness >= 0.0 && cfg.root_fitness <= 1.0))
        throw std::invalid_argument("branching_config: root fitness must be in [0,1]");
    if (cfg.window) {
        const auto [a, b] = *cfg.window;
        if (!(a >= 0.0 && a < b && b <= 1.0))
            throw std::invalid_argument("branching_config: window must satisfy 0 <= a < b <= 1");
    }
    if (cfg.level_lower_bounds) {
        if (cfg.level_lower_bounds->size() != static_cast<std::size_t>(cfg.k))
            throw std::invalid_argument(
                "branching_config: level_lower_bounds length must equal k");
        for (double l : *cfg.level_lower_bounds)
            if (!(l >= 0.0 && l <= 1.0))
                throw std::invalid_argument(
                    "branching_config: level lower bounds must be in [0,1]");
    }
    if (cfg.population_cap < 1)
        throw std::invalid_argument("branching_config: population cap must be >= 1");
}

population_sample sample_population(const branching_config& cfg, std::uint64_t replicate) {
    validate(cfg);
    const run_bounds rb = bounds_of(cfg);
    rng_stream g = stream_for(cfg.seed, replicate);
    population_sample out;
    out.counts_per_generation.push_back(1);
    std::vector<double> cur{cfg.root_fitness}, next;
    for (int t = 1; t <= cfg.k; ++t) {
        next.clear();
        for (double v : cur) {
            const double thr = rb.threshold(v, t);
            const double p = rb.b - thr;
            const int c = binomial_draw(g, cfg.N, p);
            for (int j = 0; j < c; ++j)
                next.push_back(rb.b - (rb.b - thr) * g.uniform01());
            if (static_cast<long long>(next.size()) > cfg.population_cap) {
                out.truncated = true;
                break;
            }
        }
        out.counts_per_generation.push_back(static_cast<long long>(next.size()));
        if (out.truncated) return out;
        cur.swap(next);
    }
    out.front_fitnesses = std::move(cur);
    return out;
}

final_count sample_final_count(const branching_config& cfg, std::uint64_t replicate) {
    validate(cfg);
    const run_bounds rb = bounds_of(cfg);
    rng_stream g = stream_for(cfg.seed, replicate);
    final_count out;
    std::vector<long long> gen_count(static_cast<std::size_t>(cfg.k) + 1, 0);
    gen_count[0] = 1;
    // Explicit stack of (fitness, depth); scratch reused across expansions.
    std::vector<std::pair<double, int>> stack{{cfg.root_fitness, 0}};
    while (!stack.empty()) {
        const auto [v, t] = stack.back();
        stack.pop_back();
        if (t == cfg.k) {
            ++out.count;
            continue;
        }
        const double thr = rb.threshold(v, t + 1);
        const int c = binomial_draw(g, cfg.N, rb.b - thr);
        for (int j = 0; j < c; ++j)
            stack.emplace_back(rb.b - (rb.b - thr) * g.uniform01(), t + 1);
        gen_count[static_cast<std::size_t>(t + 1)] += c;
        if (gen_count[static_cast<std::size_t>(t + 1)] > cfg.population_cap) {
            out.truncated = true;
            return out;
        }
    }
    return out;
}

namespace {

bool survival_one(const branching_config& cfg, std::uint64_t replicate) {
    const run_bounds rb = bounds_of(cfg);
    rng_stream g = stream_for(cfg.seed, replicate);
    std::vector<long long> gen_count(static_cast<std::size_t>(cfg.k) + 1, 0);
    std::vector<std::pair<double, int>> stack{{cfg.root_fitness, 0}};
    std::vector<double> kids;
    while (!stack.empty()) {
        const auto [v, t] = stack.back();
        stack.pop_back();
        if (t == cfg.k) return true;  // early exit: some vertex reached depth k
        const double thr = rb.threshold(v, t + 1);
        const int c = binomial_draw(g, cfg.N, rb.b - thr);
        if (c == 0) continue;
        kids.clear();
        for (int j = 0; j < c; ++j) kids.push_back(rb.b - (rb.b - thr) * g.uniform01());
        // Descending sort, so the lowest fitness (most room above) is
        // popped first in the supercritical phase.
        std::sort(kids.begin(), kids.end(), std::greater<double>());
        for (double f : kids) stack.emplace_back(f, t + 1);
        gen_count[static_cast<std::size_t>(t + 1)] += c;
        if (gen_count[static_cast<std::size_t>(t + 1)] > cfg.population_cap)
            return true;  // capped replicates count as surviving
    }
    return false;
}

}  // namespace

survival_estimate estimate_survival(const branching_config& cfg, long long replicates,
                                    int threads) {
    validate(cfg);
    if (replicates < 1) throw std::invalid_argument("estimate_survival: replicates must be >= 1");
    std::vector<char> alive(static_cast<std::size_t>(replicates), 0);
    parallel_for(static_cast<std::size_t>(replicates), threads, [&](std::size_t r) {
        alive[r] = survival_one(cfg, r) ? 1 : 0;
    });
    long long hits = 0;
    for (char c : alive) hits += c;  // deterministic reduction in replicate order
    survival_estimate est;
    est.replicates = replicates;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(replicates);
    est.ci_halfwidth_95 =
        1.96 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(replicates));
    return est;
}

population_sample sample_poisson_decreasing(double Lambda, int k, double root_fitness,
                                            std::uint64_t seed, std::uint64_t replicate) {
    if (!(Lambda > 0.0)) throw std::invalid_argument("sample_poisson_decreasing: Lambda must be > 0");
    if (k < 1) throw std::invalid_argument("sample_poisson_decreasing: k must be >= 1");
    if (!(root_fitness >= 0.0 && root_fitness <= 1.0))
        throw std::invalid_argument("sample_poisson_decreasing: root fitness must be in [0,1]");
    const long long cap = 10'000'000;
    rng_stream g = stream_for(seed, replicate);
    population_sample out;
    out.counts_per_generation.push_back(1);
    std::vector<double> cur{root_fitness}, next;
    for (int t = 1; t <= k; ++t) {
        next.clear();
        for (double v : cur) {
            const long long c = poisson_draw(g, Lambda * v);
            for (long long j = 0; j < c; ++j) next.push_back(v * g.uniform01());
            if (static_cast<long long>(next.size()) > cap) {
                out.truncated = true;
                break;
            }
        }
        out.counts_per_generation.push_back(static_cast<long long>(next.size()));
        if (out.truncated) return out;
        cur.swap(next);
    }
    out.front_fitnesses = std::move(cur);
    return out;
}

count_histogram brute_force_tree(int N, int k, double root_fitness, long long replicates,
                                 std::uint64_t seed) {
    if (N < 1 || k < 1) throw std::invalid_argument("brute_force_tree: need N >= 1, k >= 1");
    double nodes = 1.0;
    for (int t = 0; t < k; ++t) nodes *= N;
    if (nodes > 4096.0)
        throw std::invalid_argument("brute_force_tree: N^k exceeds the explicit-tree budget 4096");
    const long long leaves = static_cast<long long>(nodes);
    count_histogram hist;
    hist.freq.assign(static_cast<std::size_t>(leaves) + 1, 0);
    std::vector<double> fit_prev, fit_cur;
    std::vector<char> acc_prev, acc_cur;
    for (long long r = 0; r < replicates; ++r) {
        rng_stream g = stream_for(seed, static_cast<std::uint64_t>(r));
        fit_prev.assign(1, root_fitness);
        acc_prev.assign(1, 1);
        long long width = 1;
        for (int t = 1; t <= k; ++t) {
            width *= N;
            fit_cur.resize(static_cast<std::size_t>(width));
            acc_cur.resize(static_cast<std::size_t>(width));
            for (long long n = 0; n < width; ++n) {
                const double label = g.uniform01();  // every node's label is drawn
                const long long parent = n / N;
                fit_cur[static_cast<std::size_t>(n)] = label;
                acc_cur[static_cast<std::size_t>(n)] =
                    acc_prev[static_cast<std::size_t>(parent)] &&
                    label > fit_prev[static_cast<std::size_t>(parent)];
            }
            fit_prev.swap(fit_cur);
            acc_prev.swap(acc_cur);
        }
        long long z = 0;
        for (char a : acc_prev) z += a;
        ++hist.freq[static_cast<std::size_t>(z)];
    }
    return hist;
}

count_histogram population_histogram(const branching_config& cfg, long long replicates,
                                     int threads) {
    validate(cfg);
    std::vector<long long> zs(static_cast<std::size_t>(replicates), -1);
    parallel_for(static_cast<std::size_t>(replicates), threads, [&](std::size_t r) {
        population_sample s = sample_population(cfg, r);
        zs[r] = s.truncated ? -1 : s.counts_per_generation.back();
    });
    count_histogram hist;
    for (long long z : zs) {
        if (z < 0) {
            ++hist.truncated;
            continue;
        }
        if (static_cast<std::size_t>(z) >= hist.freq.size())
            hist.freq.resize(static_cast<std::size_t>(z) + 1, 0);
        ++hist.freq[static_cast<std::size_t>(z)];
    }
    return hist;
}

}  // namespace accper
