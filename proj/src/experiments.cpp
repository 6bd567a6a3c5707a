#include "accper/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "accper/csv.hpp"
#include "accper/exact.hpp"
#include "accper/gfsolve.hpp"
#include "accper/logprob.hpp"
#include "accper/manifest.hpp"
#include "accper/parallel.hpp"
#include "accper/simulate.hpp"
#include "accper/stats.hpp"
#include "accper/version.hpp"

namespace accper {

namespace {

const double euler_e = std::exp(1.0);

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return (std::filesystem::path(dir) / name).string();
}

std::string int_str(long long v) { return std::to_string(v); }

// Writes every CSV, then the manifest carrying their checksums.
run_artifacts finalize(const std::string& name, const std::string& out_dir,
                       const std::vector<std::pair<std::string, csv_table>>& tables,
                       nlohmann::json config, std::uint64_t seed, bool warning) {
    if (!out_dir.empty() && out_dir != ".") std::filesystem::create_directories(out_dir);
    run_artifacts art;
    art.experiment_name = name;
    art.precision_warning = warning;
    experiment_manifest m;
    m.experiment_name = name;
    m.config = std::move(config);
    m.seed = seed;
    m.tool_version = tool_version;
    m.schema_version = manifest_schema_version;
    for (const auto& [fname, table] : tables) {
        const std::string path = join_path(out_dir, fname);
        write_csv(path, table);
        m.artifact_checksums[fname] = fnv1a64_file(path);
        art.csv_paths.push_back(path);
    }
    art.manifest_path = join_path(out_dir, name + "_manifest.json");
    save_manifest(art.manifest_path, m);
    return art;
}

// One survival_prob evaluation, either at a fixed grid or via the
// grid-refinement ladder.
struct solver_cell {
    double survival = 0.0;
    int grid_M = 0;
    bool converged = true;
};

solver_cell solve_survival(int N, long long k, int grid_M, double ladder_tol) {
    solver_cell cell;
    if (grid_M > 0) {
        survival_result res = survival_prob(N, static_cast<int>(k), grid_M);
        cell.survival = res.value;
        cell.grid_M = grid_M;
        cell.converged = !res.precision_warning;
    } else {
        ladder_result lr = survival_grid_converged(N, static_cast<int>(k), ladder_tol);
        cell.survival = lr.value;
        cell.grid_M = lr.final_M;
        cell.converged = lr.converged;
    }
    return cell;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

run_artifacts run_phase_curve(const phase_curve_params& p, const experiment_options& opts) {
    require(!p.alphas.empty(), "phase-curve: need at least one alpha");
    require(p.N >= 1, "phase-curve: N must be >= 1");
    require(p.replicates >= 1, "phase-curve: replicates must be >= 1");
    require(p.population_cap >= 1, "phase-curve: population cap must be >= 1");
    std::vector<long long> ks;
    for (double a : p.alphas) {
        require(a > 0.0 && a < euler_e,
                "phase-curve: alpha must lie in (0, e); got " + format_double(a));
        const long long k = k_of_alpha(a, p.N);
        require(k >= 1, "phase-curve: floor(alpha*N) must be >= 1; got alpha=" +
                            format_double(a) + ", N=" + int_str(p.N));
        ks.push_back(k);
    }
    const std::size_t R = static_cast<std::size_t>(p.replicates);
    const std::size_t total = p.alphas.size() * R;
    std::vector<long long> zs(total, 0);
    std::vector<char> capped(total, 0);
    parallel_for(total, opts.threads, [&](std::size_t idx) {
        const std::size_t ai = idx / R;
        branching_config cfg;
        cfg.N = p.N;
        cfg.k = static_cast<int>(ks[ai]);
        cfg.root_fitness = 0.0;
        cfg.population_cap = p.population_cap;
        cfg.seed = p.seed;
        final_count fc = sample_final_count(cfg, idx);  // replicate key = ai*R + r
        zs[idx] = fc.count;
        capped[idx] = fc.truncated ? 1 : 0;
    });
    csv_table t;
    t.header = {"alpha", "N", "k", "replicates", "surviving", "cap_hits", "near_critical",
                "mean_log_z_over_n", "theta"};
    for (std::size_t ai = 0; ai < p.alphas.size(); ++ai) {
        long long surviving = 0, cap_hits = 0;
        double sum = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            const std::size_t idx = ai * R + r;
            if (capped[idx]) {
                ++cap_hits;
            } else if (zs[idx] > 0) {
                ++surviving;
                sum += std::log(static_cast<double>(zs[idx])) / p.N;
            }
        }
        const double mean =
            surviving > 0 ? sum / static_cast<double>(surviving)
                          : std::numeric_limits<double>::quiet_NaN();
        const bool near_critical = euler_e - p.alphas[ai] <= 0.1;
        t.rows.push_back({format_double(p.alphas[ai]), int_str(p.N), int_str(ks[ai]),
                          int_str(p.replicates), int_str(surviving), int_str(cap_hits),
                          near_critical ? "1" : "0", format_double(mean),
                          format_double(theta(p.alphas[ai]))});
    }
    nlohmann::json config;
    config["alphas"] = p.alphas;
    config["n"] = p.N;
    config["replicates"] = p.replicates;
    config["population_cap"] = p.population_cap;
    config["k_rule"] = "k = floor(alpha*N + 1e-9)";
    return finalize("phase_curve", opts.output_dir, {{"phase_curve.csv", t}}, std::move(config),
                    p.seed, false);
}

run_artifacts run_decay_rate(const decay_rate_params& p, const experiment_options& opts) {
    require(!p.alphas.empty(), "decay-rate: need at least one alpha");
    require(p.Ns.size() >= 3, "decay-rate: need at least 3 values of N for the plateau fit");
    for (double a : p.alphas)
        require(a >= euler_e - 1e-12,
                "decay-rate: alpha must be >= e; got " + format_double(a));
    for (int N : p.Ns) require(N >= 2, "decay-rate: N must be >= 2");
    require(p.ladder_tol > 0.0, "decay-rate: ladder tolerance must be > 0");
    const std::size_t cols = p.Ns.size();
    const std::size_t total = p.alphas.size() * cols;
    std::vector<solver_cell> cells(total);
    std::vector<long long> ks(total);
    for (std::size_t i = 0; i < total; ++i)
        ks[i] = k_of_alpha(p.alphas[i / cols], p.Ns[i % cols]);
    parallel_for(total, opts.threads, [&](std::size_t i) {
        cells[i] = solve_survival(p.Ns[i % cols], ks[i], p.grid_M, p.ladder_tol);
    });
    bool warning = false;
    csv_table t;
    t.header = {"alpha", "N", "k", "survival", "log_survival", "log_survival_over_n", "theta",
                "grid_M", "converged"};
    csv_table fits;
    fits.header = {"alpha", "plateau", "slope_logn_over_n", "residual_rms", "points_used",
                   "theta", "plateau_minus_theta"};
    run_artifacts art;
    for (std::size_t ai = 0; ai < p.alphas.size(); ++ai) {
        const double a = p.alphas[ai];
        std::vector<double> ts, ys;
        for (std::size_t ni = 0; ni < cols; ++ni) {
            const std::size_t i = ai * cols + ni;
            const double N = p.Ns[ni];
            const double lp = std::log(cells[i].survival);
            warning = warning || !cells[i].converged;
            t.rows.push_back({format_double(a), int_str(p.Ns[ni]), int_str(ks[i]),
                              format_double(cells[i].survival), format_double(lp),
                              format_double(lp / N), format_double(theta(a)),
                              int_str(cells[i].grid_M), cells[i].converged ? "1" : "0"});
            ts.push_back(std::log(N) / N);  // plateau basis: log p / N ~ a + b log N / N
            ys.push_back(lp / N);
        }
        fit_result fr = fit_affine(ts, ys);
        fits.rows.push_back({format_double(a), format_double(fr.intercept),
                             format_double(fr.slope), format_double(fr.residual_rms),
                             int_str(static_cast<long long>(fr.points_used)),
                             format_double(theta(a)),
                             format_double(fr.intercept - theta(a))});
        art.fits.emplace_back(a, fr);
    }
    nlohmann::json config;
    config["alphas"] = p.alphas;
    config["ns"] = p.Ns;
    config["grid_m"] = p.grid_M;
    config["ladder_tol"] = p.ladder_tol;
    config["k_rule"] = "k = floor(alpha*N + 1e-9)";
    run_artifacts out =
        finalize("decay_rate", opts.output_dir,
                 {{"decay_rate.csv", t}, {"decay_rate_fit.csv", fits}}, std::move(config),
                 p.seed, warning);
    out.fits = std::move(art.fits);
    return out;
}

run_artifacts run_critical_exponent(const critical_exponent_params& p,
                                    const experiment_options& opts) {
    require(p.Ns.size() >= 3, "critical-exponent: need at least 3 values of N");
    for (int N : p.Ns) require(N >= 2, "critical-exponent: N must be >= 2");
    const auto [lo, hi] = std::minmax_element(p.Ns.begin(), p.Ns.end());
    require(*hi >= 10 * *lo, "critical-exponent: the N sweep must span at least one decade");
    require(p.ladder_tol > 0.0, "critical-exponent: ladder tolerance must be > 0");
    const std::size_t total = p.Ns.size();
    std::vector<solver_cell> cells(total);
    std::vector<long long> ks(total);
    for (std::size_t i = 0; i < total; ++i) ks[i] = k_of_alpha(euler_e, p.Ns[i]);
    parallel_for(total, opts.threads, [&](std::size_t i) {
        cells[i] = solve_survival(p.Ns[i], ks[i], p.grid_M, p.ladder_tol);
    });
    bool warning = false;
    csv_table t;
    t.header = {"N", "k", "survival", "log_n", "log_survival", "scaled_survival", "grid_M",
                "converged"};
    std::vector<double> xs, ys;
    double min_scaled = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < total; ++i) {
        const double N = p.Ns[i];
        const double lp = std::log(cells[i].survival);
        const double scaled = cells[i].survival * std::pow(N, 1.5);
        warning = warning || !cells[i].converged;
        min_scaled = std::min(min_scaled, scaled);
        t.rows.push_back({int_str(p.Ns[i]), int_str(ks[i]), format_double(cells[i].survival),
                          format_double(std::log(N)), format_double(lp), format_double(scaled),
                          int_str(cells[i].grid_M), cells[i].converged ? "1" : "0"});
        xs.push_back(std::log(N));
        ys.push_back(lp);
    }
    fit_result fr = fit_affine(xs, ys);
    csv_table fits;
    fits.header = {"slope", "intercept", "residual_rms", "points_used", "min_scaled_survival"};
    fits.rows.push_back({format_double(fr.slope), format_double(fr.intercept),
                         format_double(fr.residual_rms),
                         int_str(static_cast<long long>(fr.points_used)),
                         format_double(min_scaled)});
    nlohmann::json config;
    config["ns"] = p.Ns;
    config["grid_m"] = p.grid_M;
    config["ladder_tol"] = p.ladder_tol;
    config["k_rule"] = "k = floor(e*N + 1e-9)";
    run_artifacts out = finalize("critical_exponent", opts.output_dir,
                                 {{"critical_exponent.csv", t}, {"critical_exponent_fit.csv", fits}},
                                 std::move(config), p.seed, warning);
    out.fits.emplace_back(euler_e, fr);
    return out;
}

run_artifacts run_critical_window(const critical_window_params& p,
                                  const experiment_options& opts) {
    require(!p.betas.empty(), "critical-window: need at least one beta");
    require(!p.Ns.empty(), "critical-window: need at least one N");
    for (int N : p.Ns) require(N >= 2, "critical-window: N must be >= 2");
    require(p.ladder_tol > 0.0, "critical-window: ladder tolerance must be > 0");
    const std::size_t cols = p.Ns.size();
    const std::size_t total = p.betas.size() * cols;
    std::vector<long long> ks(total);
    for (std::size_t i = 0; i < total; ++i) {
        ks[i] = k_of_window(p.betas[i / cols], p.Ns[i % cols]);
        require(ks[i] >= 1, "critical-window: round(e*N - beta*log N) must be >= 1 (beta=" +
                                format_double(p.betas[i / cols]) +
                                ", N=" + int_str(p.Ns[i % cols]) + ")");
    }
    std::vector<solver_cell> cells(total);
    parallel_for(total, opts.threads, [&](std::size_t i) {
        cells[i] = solve_survival(p.Ns[i % cols], ks[i], p.grid_M, p.ladder_tol);
    });
    bool warning = false;
    csv_table t;
    t.header = {"beta", "N", "k", "survival", "neg_log_survival_over_log_n", "grid_M",
                "converged"};
    for (std::size_t i = 0; i < total; ++i) {
        const double N = p.Ns[i % cols];
        warning = warning || !cells[i].converged;
        const double diag = -std::log(cells[i].survival) / std::log(N);
        t.rows.push_back({format_double(p.betas[i / cols]), int_str(p.Ns[i % cols]),
                          int_str(ks[i]), format_double(cells[i].survival), format_double(diag),
                          int_str(cells[i].grid_M), cells[i].converged ? "1" : "0"});
    }
    nlohmann::json config;
    config["betas"] = p.betas;
    config["ns"] = p.Ns;
    config["grid_m"] = p.grid_M;
    config["ladder_tol"] = p.ladder_tol;
    config["k_rule"] = "k = round(e*N - beta*log N)";
    return finalize("critical_window", opts.output_dir, {{"critical_window.csv", t}},
                    std::move(config), p.seed, warning);
}

run_artifacts run_limit_law(const limit_law_params& p, const experiment_options& opts) {
    require(p.N >= 1, "limit-law: N must be >= 1");
    require(p.lambda >= 0.0 && p.lambda < p.N, "limit-law: lambda must lie in [0, N)");
    require(p.replicates >= 2, "limit-law: need at least 2 replicates");
    require(p.population_cap >= 1, "limit-law: population cap must be >= 1");
    const double log_m = p.N * std::log(static_cast<double>(p.N)) - log_factorial(p.N);
    const std::size_t R = static_cast<std::size_t>(p.replicates);
    std::vector<long long> zs(R, 0);
    std::vector<char> capped(R, 0);
    parallel_for(R, opts.threads, [&](std::size_t r) {
        branching_config cfg;
        cfg.N = p.N;
        cfg.k = p.N;
        cfg.root_fitness = p.lambda / p.N;
        cfg.population_cap = p.population_cap;
        cfg.seed = p.seed;
        final_count fc = sample_final_count(cfg, r);
        zs[r] = fc.count;
        capped[r] = fc.truncated ? 1 : 0;
    });
    for (std::size_t r = 0; r < R; ++r)
        if (capped[r])
            throw std::runtime_error(
                "limit-law: population cap hit at replicate " + int_str(static_cast<long long>(r)) +
                "; the truncated law would be biased — raise population_cap or lower N");
    std::vector<double> x(R);
    for (std::size_t r = 0; r < R; ++r)
        x[r] = zs[r] == 0 ? 0.0 : std::exp(std::log(static_cast<double>(zs[r])) - log_m);
    csv_table t;
    t.header = {"replicate", "lambda", "N", "z", "z_over_m"};
    for (std::size_t r = 0; r < R; ++r)
        t.rows.push_back({int_str(static_cast<long long>(r)), format_double(p.lambda),
                          int_str(p.N), int_str(zs[r]), format_double(x[r])});
    const mean_se ms = sample_mean_se(x);
    double m2 = 0.0;
    for (double v : x) m2 += v * v;
    m2 /= static_cast<double>(R);
    const double normalized_m2 = m2 / (ms.mean * ms.mean);
    const double exact_mean = std::pow(1.0 - p.lambda / p.N, p.N);
    const double rate = std::exp(p.lambda);  // exponential reference has mean e^{-lambda}
    const double ks = ks_distance_exponential(x, rate);
    csv_table stats;
    stats.header = {"lambda", "N", "replicates", "sample_mean", "sample_se", "exact_mean",
                    "normalized_m2", "m2_reference", "ks_distance", "exp_rate"};
    stats.rows.push_back({format_double(p.lambda), int_str(p.N), int_str(p.replicates),
                          format_double(ms.mean), format_double(ms.se),
                          format_double(exact_mean), format_double(normalized_m2),
                          format_double(2.0), format_double(ks), format_double(rate)});
    nlohmann::json config;
    config["n"] = p.N;
    config["lambda"] = p.lambda;
    config["replicates"] = p.replicates;
    config["population_cap"] = p.population_cap;
    config["root_rule"] = "root fitness = lambda/N exactly";
    return finalize("limit_law", opts.output_dir,
                    {{"limit_law.csv", t}, {"limit_law_stats.csv", stats}}, std::move(config),
                    p.seed, false);
}

run_artifacts rerun_from_manifest(const std::string& manifest_path,
                                  const experiment_options& opts) {
    const experiment_manifest m = load_manifest(manifest_path);
    const nlohmann::json& c = m.config;
    try {
        if (m.experiment_name == "phase_curve") {
            phase_curve_params p;
            p.alphas = c.at("alphas").get<std::vector<double>>();
            p.N = c.at("n").get<int>();
            p.replicates = c.at("replicates").get<long long>();
            p.population_cap = c.at("population_cap").get<long long>();
            p.seed = m.seed;
            return run_phase_curve(p, opts);
        }
        if (m.experiment_name == "decay_rate") {
            decay_rate_params p;
            p.alphas = c.at("alphas").get<std::vector<double>>();
            p.Ns = c.at("ns").get<std::vector<int>>();
            p.grid_M = c.at("grid_m").get<int>();
            p.ladder_tol = c.at("ladder_tol").get<double>();
            p.seed = m.seed;
            return run_decay_rate(p, opts);
        }
        if (m.experiment_name == "critical_exponent") {
            critical_exponent_params p;
            p.Ns = c.at("ns").get<std::vector<int>>();
            p.grid_M = c.at("grid_m").get<int>();
            p.ladder_tol = c.at("ladder_tol").get<double>();
            p.seed = m.seed;
            return run_critical_exponent(p, opts);
        }
        if (m.experiment_name == "critical_window") {
            critical_window_params p;
            p.betas = c.at("betas").get<std::vector<double>>();
            p.Ns = c.at("ns").get<std::vector<int>>();
            p.grid_M = c.at("grid_m").get<int>();
            p.ladder_tol = c.at("ladder_tol").get<double>();
            p.seed = m.seed;
            return run_critical_window(p, opts);
        }
        if (m.experiment_name == "limit_law") {
            limit_law_params p;
            p.N = c.at("n").get<int>();
            p.lambda = c.at("lambda").get<double>();
            p.replicates = c.at("replicates").get<long long>();
            p.population_cap = c.at("population_cap").get<long long>();
            p.seed = m.seed;
            return run_limit_law(p, opts);
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("rerun: manifest " + manifest_path +
                                 " has incomplete config: " + e.what());
    }
    throw std::runtime_error("rerun: unknown experiment '" + m.experiment_name + "' in " +
                             manifest_path);
}

}  // namespace accper
