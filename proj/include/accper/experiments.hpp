#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "accper/fit.hpp"

namespace accper {

// Runtime options shared by all experiment runners. `threads` caps the worker
// pool (<= 0 means auto); results are identical at any thread count.
struct experiment_options {
    std::string output_dir = ".";
    int threads = 0;
    bool strict = false;  // reserved for callers: escalate precision warnings
};

// Paths written by a runner plus summary numbers needed by callers.
struct run_artifacts {
    std::vector<std::string> csv_paths;  // first entry is the main data CSV
    std::string manifest_path;
    std::string experiment_name;
    bool precision_warning = false;
    std::vector<std::pair<double, fit_result>> fits;  // (parameter, fit) where applicable
};

struct phase_curve_params {
    std::vector<double> alphas;  // all < e
    int N = 14;
    long long replicates = 200;
    long long population_cap = 10'000'000;
    std::uint64_t seed = 0;
};

struct decay_rate_params {
    std::vector<double> alphas;  // all > e
    std::vector<int> Ns;         // at least 3 values
    int grid_M = 0;              // 0: grid-refinement ladder until converged
    double ladder_tol = 0.002;   // log-scale convergence tolerance for the ladder
    std::uint64_t seed = 0;      // recorded for manifest symmetry; solver is deterministic
};

struct critical_exponent_params {
    std::vector<int> Ns;  // at least 3 values, spanning >= one decade
    int grid_M = 0;
    double ladder_tol = 0.01;
    std::uint64_t seed = 0;
};

struct critical_window_params {
    std::vector<double> betas;
    std::vector<int> Ns;
    int grid_M = 0;
    double ladder_tol = 0.005;
    std::uint64_t seed = 0;
};

struct limit_law_params {
    int N = 14;
    double lambda = 0.0;  // root fitness lambda/N, 0 <= lambda < N
    long long replicates = 2000;
    long long population_cap = 10'000'000;
    std::uint64_t seed = 0;
};

// Each runner writes its data CSV (plus fit/stats CSVs where noted) and a JSON
// manifest into opts.output_dir, then returns the paths.
run_artifacts run_phase_curve(const phase_curve_params& p, const experiment_options& opts);
run_artifacts run_decay_rate(const decay_rate_params& p, const experiment_options& opts);
run_artifacts run_critical_exponent(const critical_exponent_params& p,
                                    const experiment_options& opts);
run_artifacts run_critical_window(const critical_window_params& p,
                                  const experiment_options& opts);
run_artifacts run_limit_law(const limit_law_params& p, const experiment_options& opts);

// Re-executes the experiment recorded in a manifest with its stored
// parameters and seed; outputs land in opts.output_dir and must be
// byte-identical to the originals.
run_artifacts rerun_from_manifest(const std::string& manifest_path,
                                  const experiment_options& opts);

}  // namespace accper
