#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "accper/config.hpp"
#include "accper/csv.hpp"
#include "accper/exact.hpp"
#include "accper/experiments.hpp"
#include "accper/gfsolve.hpp"
#include "accper/manifest.hpp"
#include "accper/parallel.hpp"
#include "accper/simulate.hpp"
#include "accper/stats.hpp"
#include "accper/svg.hpp"
#include "accper/version.hpp"

namespace {

using namespace accper;

struct global_state {
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    std::string threads_str = "auto";
    bool strict = false;
    bool precision_warning = false;

    int threads() const {
        if (threads_str == "auto") return 0;
        try {
            const long t = std::stol(threads_str);
            if (t >= 1) return static_cast<int>(t);
        } catch (...) {
        }
        throw CLI::ValidationError("--threads", "expected a positive integer or 'auto', got '" +
                                                    threads_str + "'");
    }

    void print(const std::string& command) const {
        std::printf("command = %s\n", command.c_str());
        std::printf("seed = %" PRIu64 "\n", seed);
        std::printf("output_dir = %s\n", output_dir.c_str());
        if (threads_str == "auto")
            std::printf("threads = auto (%d)\n", resolve_threads(0));
        else
            std::printf("threads = %d\n", threads());
        std::printf("strict = %d\n", strict ? 1 : 0);
    }
};

void print_kv(const char* key, double v) { std::printf("%s = %.15g\n", key, v); }
void print_kv(const char* key, long long v) { std::printf("%s = %lld\n", key, v); }
void print_kv(const char* key, int v) { std::printf("%s = %d\n", key, v); }
void print_kv(const char* key, const std::string& v) {
    std::printf("%s = %s\n", key, v.c_str());
}

template <typename T>
CLI::Option* opt(CLI::App* cmd, const std::string& name, T& var, const std::string& desc) {
    return cmd->add_option(name, var, desc)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
        ->capture_default_str();
}

std::vector<double> parse_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string tok =
            s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty()) throw CLI::ValidationError(flag, "empty entry in list '" + s + "'");
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (...) {
            throw CLI::ValidationError(flag, "'" + tok + "' is not a number");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// N sweep: explicit list wins; otherwise arithmetic n-min..n-max when a step
// is given, else doubling from n-min (appending n-max when not reached).
std::vector<int> build_ns(const std::string& list, int n_min, int n_max, int n_step) {
    std::vector<int> ns;
    if (!list.empty()) {
        for (double v : parse_list(list, "--n-list")) ns.push_back(static_cast<int>(v));
        return ns;
    }
    if (n_min < 1 || n_max < n_min)
        throw CLI::ValidationError("--n-min/--n-max", "need 1 <= n-min <= n-max");
    if (n_step > 0) {
        for (int n = n_min; n <= n_max; n += n_step) ns.push_back(n);
    } else {
        int n = n_min;
        while (n <= n_max) {
            ns.push_back(n);
            if (n > n_max / 2) break;
            n *= 2;
        }
        if (ns.back() != n_max) ns.push_back(n_max);
    }
    return ns;
}

std::string list_str(const std::vector<double>& v) {
    std::string s;
    for (double x : v) {
        if (!s.empty()) s += ",";
        s += format_double(x);
    }
    return s;
}

std::string list_str(const std::vector<int>& v) {
    std::string s;
    for (int x : v) {
        if (!s.empty()) s += ",";
        s += std::to_string(x);
    }
    return s;
}

void print_histogram(const count_histogram& h) {
    for (std::size_t z = 0; z < h.freq.size(); ++z)
        if (h.freq[z] > 0) std::printf("z = %lld: count = %lld\n",
                                       static_cast<long long>(z), h.freq[z]);
    print_kv("truncated_replicates", h.truncated);
}

void report_artifacts(const run_artifacts& art, global_state& st, plot_kind kind) {
    for (const auto& p : art.csv_paths) print_kv("csv", p);
    print_kv("manifest", art.manifest_path);
    const std::string svg = emit_plot(art.csv_paths.front(), kind);
    print_kv("svg", svg);
    print_kv("precision_warning", art.precision_warning ? 1 : 0);
    if (art.precision_warning) st.precision_warning = true;
}

plot_kind kind_of_experiment(const std::string& name) {
    return parse_plot_kind(name);  // experiment names match plot kind names
}

// With a config file, the grammar is fixed to `accper <group> <op> [flags]`
// so file-sourced tokens can be inserted right after the op: real flags come
// later and win under the take-last policy.
std::vector<std::string> splice_config(std::vector<std::string> args) {
    std::string cfg_path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw std::runtime_error("usage: --config requires a file path");
            cfg_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            cfg_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    if (cfg_path.empty()) return args;
    if (args.size() < 2 || args[0].rfind('-', 0) == 0 || args[1].rfind('-', 0) == 0)
        throw std::runtime_error(
            "usage: with --config the command must start with '<group> <op>' "
            "(e.g. accper simulate survival --config run.cfg)");
    const std::vector<std::string> injected = config_file_args(cfg_path);
    args.insert(args.begin() + 2, injected.begin(), injected.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    global_state st;
    {
        std::random_device rd;
        st.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    if (const char* env = std::getenv("ACCPER_OUTPUT_DIR"); env && *env) st.output_dir = env;

    CLI::App app{
        "accper: accessibility percolation on N-ary trees — exact path "
        "probabilities, branching-process Monte Carlo, generating-function "
        "recursion solvers, and reproducible experiments"};
    app.require_subcommand(1);
    std::string cfg_dummy;
    app.add_option("--config", cfg_dummy,
                   "flat key=value file ('#' comments) mirroring the flags; explicit flags win");
    opt(&app, "--seed", st.seed, "64-bit RNG seed (default: drawn from OS entropy; always printed)");
    opt(&app, "--output-dir", st.output_dir,
        "artifact directory (default: $ACCPER_OUTPUT_DIR or '.')");
    opt(&app, "--threads", st.threads_str, "worker threads: positive integer or 'auto'");
    app.add_flag("--strict", st.strict,
                 "exit with status 2 when a solver precision warning is raised");
    app.set_version_flag("--version", std::string(tool_version));

    // ---- exact ----
    auto* ex = app.add_subcommand("exact", "closed forms and exact moments");
    ex->require_subcommand(1);
    ex->fallthrough();
    {
        static int k = 1, j = 2;
        auto* c = ex->add_subcommand("phi", "phi(k,J) = (J-k)/(k! J)");
        c->fallthrough();
        opt(c, "--k", k, "path depth k")->required();
        opt(c, "--j", j, "denominator bound J (k < J)")->required();
        c->callback([&, c]() {
            st.print("exact phi");
            print_kv("k", k);
            print_kv("j", j);
            print_kv("phi", phi(k, j));
        });
    }
    {
        static int k = 1, j = 1;
        static double eps = 0.0;
        auto* c = ex->add_subcommand(
            "psi", "psi(k,J,eps) = (1+1/J)^k (J+1-k)(1-eps)^k/(k!(J+1)); event floor "
                   "u_j >= eps + (1-eps)(j-1)/J");
        c->fallthrough();
        opt(c, "--k", k, "path depth k")->required();
        opt(c, "--j", j, "slope divisor J (k <= J)")->required();
        opt(c, "--eps", eps, "offset epsilon in [0,1)");
        c->callback([&]() {
            st.print("exact psi");
            print_kv("k", k);
            print_kv("j", j);
            print_kv("eps", eps);
            print_kv("psi", psi(k, j, eps));
        });
    }
    {
        static std::string lower;
        static double cap = 1.0;
        auto* c = ex->add_subcommand(
            "path-prob", "P[u_1 < ... < u_k, u_j >= lower_j, u_j <= cap] for uniform labels");
        c->fallthrough();
        opt(c, "--lower", lower, "comma-separated per-coordinate lower bounds")->required();
        auto* cap_opt = opt(c, "--cap", cap, "global upper cap (default 1)");
        c->callback([&, cap_opt]() {
            st.print("exact path-prob");
            path_bound_profile prof;
            prof.lower = parse_list(lower, "--lower");
            if (cap_opt->count()) prof.upper_cap = cap;
            print_kv("lower", lower);
            print_kv("cap", cap_opt->count() ? cap : 1.0);
            print_kv("path_prob", increasing_path_prob(prof));
        });
    }
    {
        static int l = 1, k = 2;
        auto* c = ex->add_subcommand("prob-a",
                                     "P[A_L(K)]: exact volume of u_j >= (j-L)_+/(K+1)");
        c->fallthrough();
        opt(c, "--l", l, "level offset L (0 <= L < K)");
        opt(c, "--k", k, "path depth K")->required();
        c->callback([&]() {
            st.print("exact prob-a");
            print_kv("l", l);
            print_kv("k", k);
            print_kv("prob_a", prob_A(l, k));
        });
    }
    {
        static int l = 2, k = 3;
        auto* c = ex->add_subcommand("bound-a", "explicit log-scale upper bound for P[A_L(K)]");
        c->fallthrough();
        opt(c, "--l", l, "level offset L")->required();
        opt(c, "--k", k, "path depth K")->required();
        c->callback([&]() {
            st.print("exact bound-a");
            print_kv("l", l);
            print_kv("k", k);
            const double lb = bound_A(l, k);
            print_kv("log_bound_a", lb);
            print_kv("bound_a", std::exp(lb));
        });
    }
    {
        static int i = 1, k = 2;
        auto* c = ex->add_subcommand("u-bound",
                                     "log upper bound for the shifted-floor path event D_{i,k}");
        c->fallthrough();
        opt(c, "--i", i, "shift index i")->required();
        opt(c, "--k", k, "path depth k")->required();
        c->callback([&]() {
            st.print("exact u-bound");
            print_kv("i", i);
            print_kv("k", k);
            print_kv("log_u_bound", u_bound(i, k));
        });
    }
    {
        static int n = 2, k = 1;
        static double x = 0.0;
        auto* c = ex->add_subcommand("mean-z", "E_x[Z_{N,k}] = N^k (1-x)^k / k! in log scale");
        c->fallthrough();
        opt(c, "--n", n, "tree arity N")->required();
        opt(c, "--k", k, "path depth k")->required();
        opt(c, "--x", x, "root fitness x in [0,1]");
        c->callback([&]() {
            st.print("exact mean-z");
            print_kv("n", n);
            print_kv("k", k);
            print_kv("x", x);
            const moment_summary m = mean_Z(n, k, x);
            print_kv("log_mean", m.log_mean);
            print_kv("mean", std::exp(m.log_mean));
        });
    }
    {
        static int n = 2, k = 1;
        auto* c = ex->add_subcommand("mean-z-uniform",
                                     "uniform-root mean: log of N^k/(k+1)!");
        c->fallthrough();
        opt(c, "--n", n, "tree arity N")->required();
        opt(c, "--k", k, "path depth k")->required();
        c->callback([&]() {
            st.print("exact mean-z-uniform");
            print_kv("n", n);
            print_kv("k", k);
            const double lm = mean_Z_uniform_root(n, k);
            print_kv("log_mean", lm);
            print_kv("mean", std::exp(lm));
        });
    }
    {
        static int n = 2, k = 1;
        static double x = 0.0;
        auto* c = ex->add_subcommand("second-moment",
                                     "E_x[Z^2] via the overlap sum, plus E[Z^2]/E[Z]^2");
        c->fallthrough();
        opt(c, "--n", n, "tree arity N")->required();
        opt(c, "--k", k, "path depth k")->required();
        opt(c, "--x", x, "root fitness x in [0,1)");
        c->callback([&]() {
            st.print("exact second-moment");
            print_kv("n", n);
            print_kv("k", k);
            print_kv("x", x);
            const moment_summary m = second_moment_Z(n, k, x);
            print_kv("log_mean", m.log_mean);
            print_kv("log_second_moment", m.log_second_moment);
            print_kv("normalized_second_moment", m.normalized_second_moment);
        });
    }
    {
        static double alpha = 1.0;
        auto* c = ex->add_subcommand("theta", "theta(alpha) = alpha (1 - ln alpha)");
        c->fallthrough();
        opt(c, "--alpha", alpha, "depth ratio alpha = k/N")->required();
        c->callback([&]() {
            st.print("exact theta");
            print_kv("alpha", alpha);
            print_kv("theta", theta(alpha));
        });
    }
    {
        static double alpha = 1.0;
        static int n = 2;
        auto* c = ex->add_subcommand("k-of-alpha", "k = floor(alpha*N + 1e-9)");
        c->fallthrough();
        opt(c, "--alpha", alpha, "depth ratio alpha")->required();
        opt(c, "--n", n, "tree arity N")->required();
        c->callback([&]() {
            st.print("exact k-of-alpha");
            print_kv("alpha", alpha);
            print_kv("n", n);
            print_kv("k", k_of_alpha(alpha, n));
        });
    }
    {
        static double beta = 1.5;
        static int n = 2;
        auto* c = ex->add_subcommand("k-of-window", "k = round(e*N - beta*log N)");
        c->fallthrough();
        opt(c, "--beta", beta, "window coefficient beta")->required();
        opt(c, "--n", n, "tree arity N")->required();
        c->callback([&]() {
            st.print("exact k-of-window");
            print_kv("beta", beta);
            print_kv("n", n);
            print_kv("k", k_of_window(beta, n));
        });
    }

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "branching-representation Monte Carlo");
    sim->require_subcommand(1);
    sim->fallthrough();
    struct sim_flags {
        int n = 2, k = 2;
        double root = 0.0;
        long long cap = 10'000'000;
        CLI::Option *wa_opt = nullptr, *wb_opt = nullptr, *ll_opt = nullptr;
        double wa = 0.0, wb = 1.0;
        std::string level_lower;

        void add_common(CLI::App* c) {
            opt(c, "--n", n, "tree arity N")->required();
            opt(c, "--k", k, "path depth k")->required();
            opt(c, "--root", root, "root fitness in [0,1]");
            opt(c, "--population-cap", cap, "per-generation population cap");
            wa_opt = opt(c, "--window-a", wa, "window lower edge a (with --window-b)");
            wb_opt = opt(c, "--window-b", wb, "window upper edge b (with --window-a)");
            ll_opt = opt(c, "--level-lower", level_lower,
                         "comma-separated per-level lower bounds (length k)");
        }
        branching_config config(std::uint64_t seed) const {
            branching_config cfg;
            cfg.N = n;
            cfg.k = k;
            cfg.root_fitness = root;
            cfg.population_cap = cap;
            cfg.seed = seed;
            if (wa_opt->count() || wb_opt->count()) {
                if (!wa_opt->count() || !wb_opt->count())
                    throw CLI::ValidationError("--window-a/--window-b",
                                               "both window edges are required together");
                cfg.window = std::make_pair(wa, wb);
            }
            if (ll_opt->count()) cfg.level_lower_bounds = parse_list(level_lower, "--level-lower");
            return cfg;
        }
        void print() const {
            print_kv("n", n);
            print_kv("k", k);
            print_kv("root", root);
            print_kv("population_cap", cap);
            if (wa_opt->count()) {
                print_kv("window_a", wa);
                print_kv("window_b", wb);
            }
            if (ll_opt->count()) print_kv("level_lower", level_lower);
        }
    };
    {
        static sim_flags f;
        static std::uint64_t replicate = 0;
        auto* c = sim->add_subcommand("population",
                                      "one replicate: per-generation counts and final front");
        c->fallthrough();
        f.add_common(c);
        opt(c, "--replicate", replicate, "replicate index within the seed's stream family");
        c->callback([&]() {
            st.print("simulate population");
            f.print();
            print_kv("replicate", static_cast<long long>(replicate));
            const population_sample s = sample_population(f.config(st.seed), replicate);
            std::string counts;
            for (long long v : s.counts_per_generation) {
                if (!counts.empty()) counts += ",";
                counts += std::to_string(v);
            }
            print_kv("counts_per_generation", counts);
            print_kv("truncated", s.truncated ? 1 : 0);
        });
    }
    {
        static sim_flags f;
        static std::uint64_t replicate = 0;
        auto* c = sim->add_subcommand("final-count",
                                      "one replicate: number of depth-k accessible vertices");
        c->fallthrough();
        f.add_common(c);
        opt(c, "--replicate", replicate, "replicate index");
        c->callback([&]() {
            st.print("simulate final-count");
            f.print();
            print_kv("replicate", static_cast<long long>(replicate));
            const final_count fc = sample_final_count(f.config(st.seed), replicate);
            print_kv("z", fc.count);
            print_kv("truncated", fc.truncated ? 1 : 0);
        });
    }
    {
        static sim_flags f;
        static long long replicates = 10000;
        auto* c = sim->add_subcommand("survival", "Monte Carlo estimate of P(Z >= 1)");
        c->fallthrough();
        f.add_common(c);
        opt(c, "--replicates", replicates, "number of replicates");
        c->callback([&]() {
            st.print("simulate survival");
            f.print();
            print_kv("replicates", replicates);
            const survival_estimate est =
                estimate_survival(f.config(st.seed), replicates, st.threads());
            print_kv("p_hat", est.p_hat);
            print_kv("ci_halfwidth_95", est.ci_halfwidth_95);
            print_kv("ci_low", est.p_hat - est.ci_halfwidth_95);
            print_kv("ci_high", est.p_hat + est.ci_halfwidth_95);
        });
    }
    {
        static sim_flags f;
        static long long replicates = 10000;
        auto* c = sim->add_subcommand("histogram", "sampled distribution of the final count Z");
        c->fallthrough();
        f.add_common(c);
        opt(c, "--replicates", replicates, "number of replicates");
        c->callback([&]() {
            st.print("simulate histogram");
            f.print();
            print_kv("replicates", replicates);
            print_histogram(population_histogram(f.config(st.seed), replicates, st.threads()));
        });
    }
    {
        static int n = 2, k = 2;
        static double root = 0.0;
        static long long replicates = 10000;
        auto* c = sim->add_subcommand(
            "brute", "distribution of Z from fully materialized N^k trees (N^k <= 4096)");
        c->fallthrough();
        opt(c, "--n", n, "tree arity N")->required();
        opt(c, "--k", k, "path depth k")->required();
        opt(c, "--root", root, "root fitness in [0,1]");
        opt(c, "--replicates", replicates, "number of replicates");
        c->callback([&]() {
            st.print("simulate brute");
            print_kv("n", n);
            print_kv("k", k);
            print_kv("root", root);
            print_kv("replicates", replicates);
            print_histogram(brute_force_tree(n, k, root, replicates, st.seed));
        });
    }
    {
        static double Lambda = 2.0, root = 1.0;
        static int k = 3;
        static std::uint64_t replicate = 0;
        auto* c = sim->add_subcommand(
            "poisson", "decreasing-labels Poisson cascade: offspring ~ Poisson(Lambda * v)");
        c->fallthrough();
        opt(c, "--big-lambda", Lambda, "intensity Lambda")->required();
        opt(c, "--k", k, "depth k")->required();
        opt(c, "--root", root, "root value in [0,1]");
        opt(c, "--replicate", replicate, "replicate index");
        c->callback([&]() {
            st.print("simulate poisson");
            print_kv("big_lambda", Lambda);
            print_kv("k", k);
            print_kv("root", root);
            print_kv("replicate", static_cast<long long>(replicate));
            const population_sample s = sample_poisson_decreasing(Lambda, k, root, st.seed, replicate);
            std::string counts;
            for (long long v : s.counts_per_generation) {
                if (!counts.empty()) counts += ",";
                counts += std::to_string(v);
            }
            print_kv("counts_per_generation", counts);
            print_kv("truncated", s.truncated ? 1 : 0);
        });
    }

    // ---- gfsolve ----
    auto* gf = app.add_subcommand("gfsolve", "generating-function recursion solvers");
    gf->require_subcommand(1);
    gf->fallthrough();
    {
        static int n = 2, k = 2, m = 0;
        auto* c = gf->add_subcommand("survival",
                                     "P(Z >= 1) by recursion, with grid-doubling diagnostic");
        c->fallthrough();
        opt(c, "--n", n, "tree arity N")->required();
        opt(c, "--k", k, "path depth k")->required();
        opt(c, "--grid-m", m, "grid intervals M (0: default max(4096, 16N))");
        c->callback([&]() {
            st.print("gfsolve survival");
            print_kv("n", n);
            print_kv("k", k);
            const survival_result r = survival_prob(n, k, m);
            print_kv("grid_m", r.grid_points);
            print_kv("survival", r.value);
            print_kv("doubling_rel_change", r.doubling_rel_change);
            print_kv("precision_warning", r.precision_warning ? 1 : 0);
            if (r.precision_warning) st.precision_warning = true;
        });
    }
    {
        static int n = 2, k = 2, m0 = 0, m_max = 1 << 23;
        static double tol = 0.002;
        auto* c = gf->add_subcommand("survival-ladder",
                                     "grid-refinement ladder until log-scale convergence");
        c->fallthrough();
        opt(c, "--n", n, "tree arity N")->required();
        opt(c, "--k", k, "path depth k")->required();
        opt(c, "--tol", tol, "log-scale agreement tolerance between doublings");
        opt(c, "--grid-m", m0, "starting grid (0: default)");
        opt(c, "--m-max", m_max, "grid ceiling");
        c->callback([&]() {
            st.print("gfsolve survival-ladder");
            print_kv("n", n);
            print_kv("k", k);
            print_kv("tol", tol);
            const ladder_result r = survival_grid_converged(n, k, tol, m0, m_max);
            print_kv("survival", r.value);
            print_kv("final_m", r.final_M);
            print_kv("doublings", r.doublings);
            print_kv("converged", r.converged ? 1 : 0);
            if (!r.converged) st.precision_warning = true;
        });
    }
    {
        static int n = 2, k = 2, m = 0;
        static double s_val = 0.0;
        auto* c = gf->add_subcommand("iterate-f", "extinction-kernel iterate f_k(s, b) at b = 1");
        c->fallthrough();
        opt(c, "--n", n, "tree arity N")->required();
        opt(c, "--k", k, "iteration count k")->required();
        opt(c, "--s", s_val, "root argument s in [0,1]");
        opt(c, "--grid-m", m, "grid intervals M (0: default)");
        c->callback([&]() {
            st.print("gfsolve iterate-f");
            print_kv("n", n);
            print_kv("k", k);
            print_kv("s", s_val);
            const grid_function g = iterate_f(n, k, s_val, m > 0 ? m : default_grid(n));
            const double last = g.values.back();
            const bool comp = g.representation == grid_repr::survival_complement;
            print_kv("grid_m", g.grid_points);
            print_kv("f_at_b1", comp ? 1.0 - last : last);
            if (comp) print_kv("survival_complement_at_b1", last);
            print_kv("doubling_rel_change", g.doubling_rel_change);
            print_kv("precision_warning", g.precision_warning ? 1 : 0);
            if (g.precision_warning) st.precision_warning = true;
        });
    }
    {
        static double Lambda = 2.0, s_val = 0.0;
        static int k = 2, m = 4096;
        auto* c = gf->add_subcommand("iterate-d", "Poisson analogue d_k(s, x) at x = 1");
        c->fallthrough();
        opt(c, "--big-lambda", Lambda, "intensity Lambda")->required();
        opt(c, "--k", k, "iteration count k")->required();
        opt(c, "--s", s_val, "root argument s in [0,1]");
        opt(c, "--grid-m", m, "grid intervals M");
        c->callback([&]() {
            st.print("gfsolve iterate-d");
            print_kv("big_lambda", Lambda);
            print_kv("k", k);
            print_kv("s", s_val);
            const grid_function g = iterate_d(Lambda, k, s_val, m);
            print_kv("grid_m", g.grid_points);
            print_kv("d_at_x1", g.values.back());
        });
    }
    {
        static int n = 10, k = 8, m = 4096;
        static double Lambda = 2.0, s_val = 0.0, tol = 1e-8;
        auto* c = gf->add_subcommand(
            "coupling", "verify f_k(s, Lambda u / N) <= d_k(s, u) across the grid");
        c->fallthrough();
        opt(c, "--n", n, "tree arity N")->required();
        opt(c, "--big-lambda", Lambda, "intensity Lambda")->required();
        opt(c, "--k", k, "levels to check")->required();
        opt(c, "--s", s_val, "root argument s in [0,1]");
        opt(c, "--grid-m", m, "grid intervals M");
        opt(c, "--tol", tol, "allowed violation");
        c->callback([&]() {
            st.print("gfsolve coupling");
            print_kv("n", n);
            print_kv("big_lambda", Lambda);
            print_kv("k", k);
            print_kv("s", s_val);
            print_kv("tol", tol);
            const coupling_report r = check_coupling(n, Lambda, k, s_val, m, tol);
            print_kv("grid_m", m);
            print_kv("pass", r.pass ? 1 : 0);
            print_kv("max_violation", r.max_violation);
            print_kv("levels", r.levels);
        });
    }
    {
        static int k = 15, m = 16384;
        static double z_max = 50.0;
        auto* c = gf->add_subcommand(
            "f-limit", "limit recursion F_k toward 1/(1+z), with the scaled deficit profile");
        c->fallthrough();
        opt(c, "--k", k, "iteration count k")->required();
        opt(c, "--grid-m", m, "grid intervals M");
        opt(c, "--z-max", z_max, "right end of the z grid");
        c->callback([&]() {
            st.print("gfsolve f-limit");
            print_kv("k", k);
            print_kv("grid_m", m);
            print_kv("z_max", z_max);
            const f_limit_profile p = iterate_F(k, m, z_max);
            double max_abs = 0.0;
            for (std::size_t i = 0; i < p.z.size(); ++i)
                max_abs = std::max(max_abs, std::abs(p.F[i] - 1.0 / (1.0 + p.z[i])));
            print_kv("delta_max", p.delta_max);
            print_kv("delta_min", p.delta_min);
            print_kv("max_abs_deficit", max_abs);
        });
    }
    {
        static int m = 16384;
        static double z_max = 50.0;
        auto* c = gf->add_subcommand("delta0", "empirical bound constant: max of delta at k = 0");
        c->fallthrough();
        opt(c, "--grid-m", m, "grid intervals M");
        opt(c, "--z-max", z_max, "right end of the z grid");
        c->callback([&]() {
            st.print("gfsolve delta0");
            print_kv("grid_m", m);
            print_kv("z_max", z_max);
            print_kv("delta0_bound", delta0_bound(m, z_max));
        });
    }
    {
        static double mu = 1.0, lambda = 0.0;
        static int k = 12, n = 600, m = 0;
        auto* c = gf->add_subcommand("g-iterate",
                                     "iterated map G_k(mu, x, N) evaluated at x = lambda/N");
        c->fallthrough();
        opt(c, "--mu", mu, "initial intensity mu")->required();
        opt(c, "--k", k, "iteration count k")->required();
        opt(c, "--n", n, "tree arity N")->required();
        opt(c, "--lambda", lambda, "root parameter lambda (x = lambda/N)");
        opt(c, "--grid-m", m, "grid intervals M (0: default)");
        c->callback([&]() {
            st.print("gfsolve g-iterate");
            print_kv("mu", mu);
            print_kv("k", k);
            print_kv("n", n);
            print_kv("lambda", lambda);
            print_kv("g_value", iterate_G(mu, k, n, lambda, m));
        });
    }

    // ---- experiment ----
    auto* exp = app.add_subcommand("experiment", "reproducible CSV/manifest/SVG pipelines");
    exp->require_subcommand(1);
    exp->fallthrough();
    {
        static std::string alphas = "1,1.5,2,2.5,2.708281828459045";
        static int n = 14;
        static long long replicates = 200, cap = 10'000'000;
        auto* c = exp->add_subcommand("phase-curve",
                                      "mean log Z / N across alpha < e vs theta(alpha)");
        c->fallthrough();
        opt(c, "--alpha", alphas, "comma-separated list of depth ratios alpha");
        opt(c, "--n", n, "tree arity N");
        opt(c, "--replicates", replicates, "Monte Carlo replicates per alpha");
        opt(c, "--population-cap", cap, "per-generation population cap");
        c->callback([&]() {
            st.print("experiment phase-curve");
            phase_curve_params p;
            p.alphas = parse_list(alphas, "--alpha");
            p.N = n;
            p.replicates = replicates;
            p.population_cap = cap;
            p.seed = st.seed;
            print_kv("alpha", list_str(p.alphas));
            print_kv("n", n);
            print_kv("replicates", replicates);
            print_kv("population_cap", cap);
            experiment_options opts{st.output_dir, st.threads(), st.strict};
            report_artifacts(run_phase_curve(p, opts), st, plot_kind::phase_curve);
        });
    }
    {
        static std::string alphas = "3", n_list;
        static int n_min = 100, n_max = 200, n_step = 20, grid_m = 0;
        static double tol = 0.002;
        auto* c = exp->add_subcommand("decay-rate",
                                      "log survival / N plateau vs theta(alpha) for alpha > e");
        c->fallthrough();
        opt(c, "--alpha", alphas, "comma-separated list of depth ratios alpha (> e)");
        opt(c, "--n-list", n_list, "explicit comma-separated N sweep");
        opt(c, "--n-min", n_min, "sweep start N");
        opt(c, "--n-max", n_max, "sweep end N");
        opt(c, "--n-step", n_step, "arithmetic step (0: doubling)");
        opt(c, "--grid-m", grid_m, "fixed solver grid (0: refinement ladder)");
        opt(c, "--tol", tol, "ladder convergence tolerance");
        c->callback([&]() {
            st.print("experiment decay-rate");
            decay_rate_params p;
            p.alphas = parse_list(alphas, "--alpha");
            p.Ns = build_ns(n_list, n_min, n_max, n_step);
            p.grid_M = grid_m;
            p.ladder_tol = tol;
            p.seed = st.seed;
            print_kv("alpha", list_str(p.alphas));
            print_kv("ns", list_str(p.Ns));
            print_kv("grid_m", grid_m);
            print_kv("tol", tol);
            experiment_options opts{st.output_dir, st.threads(), st.strict};
            const run_artifacts art = run_decay_rate(p, opts);
            for (const auto& [a, fr] : art.fits) {
                std::printf("fit alpha=%.15g: plateau = %.15g, theta = %.15g, rms = %.15g\n", a,
                            fr.intercept, theta(a), fr.residual_rms);
            }
            report_artifacts(art, st, plot_kind::decay_rate);
        });
    }
    {
        static std::string n_list;
        static int n_min = 50, n_max = 800, n_step = 0, grid_m = 0;
        static double tol = 0.01;
        auto* c = exp->add_subcommand("critical-exponent",
                                      "slope of log survival vs log N at k = floor(e N)");
        c->fallthrough();
        opt(c, "--n-list", n_list, "explicit comma-separated N sweep");
        opt(c, "--n-min", n_min, "sweep start N");
        opt(c, "--n-max", n_max, "sweep end N");
        opt(c, "--n-step", n_step, "arithmetic step (0: doubling)");
        opt(c, "--grid-m", grid_m, "fixed solver grid (0: refinement ladder)");
        opt(c, "--tol", tol, "ladder convergence tolerance");
        c->callback([&]() {
            st.print("experiment critical-exponent");
            critical_exponent_params p;
            p.Ns = build_ns(n_list, n_min, n_max, n_step);
            p.grid_M = grid_m;
            p.ladder_tol = tol;
            p.seed = st.seed;
            print_kv("ns", list_str(p.Ns));
            print_kv("grid_m", grid_m);
            print_kv("tol", tol);
            experiment_options opts{st.output_dir, st.threads(), st.strict};
            const run_artifacts art = run_critical_exponent(p, opts);
            if (!art.fits.empty()) {
                print_kv("slope", art.fits.front().second.slope);
                print_kv("intercept", art.fits.front().second.intercept);
                print_kv("residual_rms", art.fits.front().second.residual_rms);
            }
            report_artifacts(art, st, plot_kind::critical_exponent);
        });
    }
    {
        static std::string betas = "3", n_list;
        static int n_min = 50, n_max = 400, n_step = 0, grid_m = 0;
        static double tol = 0.005;
        auto* c = exp->add_subcommand("critical-window",
                                      "survival across k = round(e N - beta log N)");
        c->fallthrough();
        opt(c, "--beta", betas, "comma-separated list of window coefficients beta");
        opt(c, "--n-list", n_list, "explicit comma-separated N sweep");
        opt(c, "--n-min", n_min, "sweep start N");
        opt(c, "--n-max", n_max, "sweep end N");
        opt(c, "--n-step", n_step, "arithmetic step (0: doubling)");
        opt(c, "--grid-m", grid_m, "fixed solver grid (0: refinement ladder)");
        opt(c, "--tol", tol, "ladder convergence tolerance");
        c->callback([&]() {
            st.print("experiment critical-window");
            critical_window_params p;
            p.betas = parse_list(betas, "--beta");
            p.Ns = build_ns(n_list, n_min, n_max, n_step);
            p.grid_M = grid_m;
            p.ladder_tol = tol;
            p.seed = st.seed;
            print_kv("beta", list_str(p.betas));
            print_kv("ns", list_str(p.Ns));
            print_kv("grid_m", grid_m);
            print_kv("tol", tol);
            experiment_options opts{st.output_dir, st.threads(), st.strict};
            report_artifacts(run_critical_window(p, opts), st, plot_kind::critical_window);
        });
    }
    {
        static int n = 14;
        static double lambda = 0.0;
        static long long replicates = 2000, cap = 10'000'000;
        auto* c = exp->add_subcommand(
            "limit-law", "distribution of Z_{N,N}/m_N at root lambda/N vs the exponential law");
        c->fallthrough();
        opt(c, "--n", n, "tree arity N (= depth k)");
        opt(c, "--lambda", lambda, "root parameter lambda (root fitness lambda/N)");
        opt(c, "--replicates", replicates, "Monte Carlo replicates");
        opt(c, "--population-cap", cap, "per-generation population cap (hits abort the run)");
        c->callback([&]() {
            st.print("experiment limit-law");
            limit_law_params p;
            p.N = n;
            p.lambda = lambda;
            p.replicates = replicates;
            p.population_cap = cap;
            p.seed = st.seed;
            print_kv("n", n);
            print_kv("lambda", lambda);
            print_kv("replicates", replicates);
            print_kv("population_cap", cap);
            experiment_options opts{st.output_dir, st.threads(), st.strict};
            report_artifacts(run_limit_law(p, opts), st, plot_kind::limit_law);
        });
    }
    {
        static std::string csv, kind = "phase-curve";
        auto* c = exp->add_subcommand("plot", "render a runner CSV as a standalone SVG");
        c->fallthrough();
        opt(c, "--csv", csv, "input CSV path")->required();
        opt(c, "--kind", kind,
            "plot kind: phase-curve, decay-rate, critical-exponent, critical-window, limit-law");
        c->callback([&]() {
            st.print("experiment plot");
            print_kv("csv", csv);
            print_kv("kind", kind);
            print_kv("svg", emit_plot(csv, parse_plot_kind(kind)));
        });
    }
    {
        static std::string manifest_path;
        auto* c = exp->add_subcommand(
            "rerun", "re-execute an experiment from its manifest (byte-identical CSVs)");
        c->fallthrough();
        opt(c, "--manifest", manifest_path, "manifest JSON path")->required();
        c->callback([&]() {
            st.print("experiment rerun");
            print_kv("manifest_in", manifest_path);
            experiment_options opts{st.output_dir, st.threads(), st.strict};
            const run_artifacts art = rerun_from_manifest(manifest_path, opts);
            report_artifacts(art, st, kind_of_experiment(art.experiment_name));
        });
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<const char*> cargv;
    try {
        args = splice_config(std::move(args));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    cargv.push_back(argv[0]);
    for (const auto& s : args) cargv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    if (st.precision_warning && st.strict) {
        std::fprintf(stderr, "precision warning raised under --strict\n");
        return 2;
    }
    return 0;
}
