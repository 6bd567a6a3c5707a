#pragma once

// Monte Carlo engines for the accessible population: the branching-process
// representation (each front individual of fitness v spawns
// Binomial(N, (b - max(v, a, l_t))_+) children with fitnesses uniform on
// (threshold, b]), a survival-only depth-first estimator with early exit, a
// decreasing-chain Poisson process, and an explicit-tree brute-force oracle.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace accper {

struct branching_config {
    int N = 2;
    int k = 1;
    double root_fitness = 0.0;
    std::optional<std::pair<double, double>> window;            // (a, b], default (0, 1]
    std::optional<std::vector<double>> level_lower_bounds;      // length k when present
    long long population_cap = 10'000'000;
    std::uint64_t seed = 0;
};

struct population_sample {
    // counts_per_generation[t] is the accessible count at depth t;
    // entry 0 is the root itself (always 1).
    std::vector<long long> counts_per_generation;
    std::vector<double> front_fitnesses;  // final generation (empty if truncated)
    bool truncated = false;
};

struct survival_estimate {
    double p_hat = 0.0;
    long long replicates = 0;
    double ci_halfwidth_95 = 0.0;  // Wald: 1.96 sqrt(p(1-p)/n)
};

struct final_count {
    long long count = 0;
    bool truncated = false;
};

struct count_histogram {
    std::vector<long long> freq;  // freq[z] = number of replicates with Z = z
    long long truncated = 0;      // replicates excluded for hitting the cap
};

void validate(const branching_config& cfg);

// One full trajectory; replicate r of a seeded run uses the RNG stream keyed
// by (cfg.seed, r). Growth stops (flagged, not an error) at the first
// generation whose count exceeds population_cap.
population_sample sample_population(const branching_config& cfg, std::uint64_t replicate = 0);

// Final-generation count only, via depth-first traversal in O(k*N) memory —
// same law as sample_population, usable when intermediate generations are
// too large to store. Per-generation counts still respect the cap.
final_count sample_final_count(const branching_config& cfg, std::uint64_t replicate = 0);

// Survival of generation k: depth-first with an explicit stack, expanding
// lowest-fitness-first (children sorted descending, popped from the back)
// and exiting the moment any vertex reaches depth k. Capped replicates
// count as surviving. Deterministic for any thread count.
survival_estimate estimate_survival(const branching_config& cfg, long long replicates,
                                    int threads = 0);

// Decreasing-chain Poisson process: fitness v spawns Poisson(Lambda*v)
// children with fitnesses uniform on [0, v).
population_sample sample_poisson_decreasing(double Lambda, int k, double root_fitness,
                                            std::uint64_t seed, std::uint64_t replicate = 0);

// Materializes the full N-ary depth-k tree (requires N^k <= 4096), draws all
// labels i.i.d. uniform, and counts accessible depth-k vertices by the
// definition: every label along the root path strictly increasing and above
// root_fitness. Returns the empirical distribution of Z over replicates.
count_histogram brute_force_tree(int N, int k, double root_fitness, long long replicates,
                                 std::uint64_t seed);

// Distribution of the final count from the branching sampler, for two-sample
// comparison against brute_force_tree.
count_histogram population_histogram(const branching_config& cfg, long long replicates,
                                     int threads = 0);

}  // namespace accper
