#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "accper/csv.hpp"
#include "accper/exact.hpp"
#include "accper/experiments.hpp"
#include "accper/manifest.hpp"

using namespace accper;
namespace fs = std::filesystem;

namespace {

struct temp_dir {
    fs::path path;
    explicit temp_dir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("accper_exp_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~temp_dir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

double cell(const csv_table& t, std::size_t row, const std::string& col) {
    return parse_csv_double(t, row, csv_column(t, col));
}

}  // namespace

TEST_CASE("phase curve at alpha=1, N=14 reproduces the oracle mean") {
    temp_dir td("phase1");
    experiment_options o;
    o.output_dir = td.str();
    phase_curve_params p;
    p.alphas = {1.0};
    p.N = 14;
    p.replicates = 400;
    p.seed = 777;
    auto a = run_phase_curve(p, o);
    CHECK(a.experiment_name == "phase_curve");
    REQUIRE(a.csv_paths.size() == 1);
    CHECK(fs::exists(a.csv_paths[0]));
    CHECK(fs::exists(a.manifest_path));
    auto t = read_csv(a.csv_paths[0]);
    REQUIRE(t.rows.size() == 1);
    CHECK(cell(t, 0, "k") == 14);
    CHECK(cell(t, 0, "replicates") == 400);
    CHECK(cell(t, 0, "surviving") == 400);
    CHECK(cell(t, 0, "cap_hits") == 0);
    CHECK(cell(t, 0, "near_critical") == 0);
    CHECK(cell(t, 0, "theta") == 1.0);
    // Finite-size-biased target: MC oracle mean 0.80395 (2000 reps), well
    // below theta(1) = 1; the band is mean +- ~5 SE at 400 replicates.
    const double m = cell(t, 0, "mean_log_z_over_n");
    CHECK(m >= 0.77);
    CHECK(m <= 0.83);
}

TEST_CASE("phase curve flags near-critical alphas and rejects bad ones") {
    temp_dir td("phase_flags");
    experiment_options o;
    o.output_dir = td.str();
    phase_curve_params p;
    p.alphas = {2.7};
    p.N = 4;
    p.replicates = 10;
    p.seed = 5;
    auto a = run_phase_curve(p, o);
    auto t = read_csv(a.csv_paths[0]);
    CHECK(cell(t, 0, "near_critical") == 1);
    CHECK(cell(t, 0, "k") == 10);  // floor(2.7 * 4)

    p.alphas = {std::exp(1.0)};
    CHECK_THROWS_AS(run_phase_curve(p, o), std::invalid_argument);
    p.alphas = {0.0};
    CHECK_THROWS_AS(run_phase_curve(p, o), std::invalid_argument);
    p.alphas = {0.1};
    p.N = 4;  // floor(0.4) = 0 generations
    CHECK_THROWS_AS(run_phase_curve(p, o), std::invalid_argument);
}

TEST_CASE("phase curve at alpha=2, N=20 stays in the heavy-tail oracle band") {
    // Mid-levels reach ~4e7 accessible vertices; the depth-first counter
    // keeps memory at O(k N) while the raised cap keeps replicates exact.
    temp_dir td("phase2");
    experiment_options o;
    o.output_dir = td.str();
    phase_curve_params p;
    p.alphas = {2.0};
    p.N = 20;
    p.replicates = 6;
    p.population_cap = 500'000'000LL;
    p.seed = 424242;
    auto a = run_phase_curve(p, o);
    auto t = read_csv(a.csv_paths[0]);
    CHECK(cell(t, 0, "cap_hits") == 0);
    // Independent-oracle mean 0.3595, replicate SD 0.1732 (heavy left tail):
    // a 6-replicate mean lands in [0.05, 0.65].
    const double m = cell(t, 0, "mean_log_z_over_n");
    CHECK(m >= 0.05);
    CHECK(m <= 0.65);
}

TEST_CASE("decay-rate plateau recovers theta(3) from the two-term fit") {
    temp_dir td("decay3");
    experiment_options o;
    o.output_dir = td.str();
    decay_rate_params p;
    p.alphas = {3.0};
    p.Ns = {60, 80, 100};
    p.seed = 1;
    auto a = run_decay_rate(p, o);
    REQUIRE(a.csv_paths.size() == 2);
    REQUIRE(a.fits.size() == 1);
    CHECK(a.fits[0].first == 3.0);
    const double th = theta(3.0);
    // Measured intercept -0.28637 (3.2% off); allow 8%.
    CHECK(std::fabs(a.fits[0].second.intercept - th) <= 0.08 * std::fabs(th));
    CHECK_FALSE(a.precision_warning);
    auto t = read_csv(a.csv_paths[0]);
    REQUIRE(t.rows.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(cell(t, r, "k") == 3.0 * static_cast<double>(p.Ns[r]));
        CHECK(cell(t, r, "converged") == 1);
        CHECK(cell(t, r, "survival") > 0.0);
        CHECK(cell(t, r, "survival") < 1e-4);  // deep subcritical
    }
    auto fit = read_csv(a.csv_paths[1]);
    CHECK(cell(fit, 0, "plateau") == doctest::Approx(a.fits[0].second.intercept));
    CHECK(cell(fit, 0, "points_used") == 3);
}

TEST_CASE("decay-rate accepts alpha = e and its plateau vanishes") {
    temp_dir td("decaye");
    experiment_options o;
    o.output_dir = td.str();
    decay_rate_params p;
    p.alphas = {std::exp(1.0)};
    p.Ns = {100, 140, 200};
    p.seed = 1;
    auto a = run_decay_rate(p, o);
    // theta(e) = 0; measured intercept -0.00145.
    CHECK(std::fabs(a.fits[0].second.intercept) <= 0.005);
    p.alphas = {2.0};  // below e is rejected
    CHECK_THROWS_AS(run_decay_rate(p, o), std::invalid_argument);
    p.alphas = {3.0};
    p.Ns = {60, 80};  // too few points for the plateau fit
    CHECK_THROWS_AS(run_decay_rate(p, o), std::invalid_argument);
}

TEST_CASE("a fixed coarse grid raises the precision warning") {
    temp_dir td("decay_warn");
    experiment_options o;
    o.output_dir = td.str();
    decay_rate_params p;
    p.alphas = {3.0};
    p.Ns = {60, 80, 100};
    p.grid_M = 64;
    p.seed = 1;
    auto a = run_decay_rate(p, o);
    CHECK(a.precision_warning);
    auto t = read_csv(a.csv_paths[0]);
    CHECK(cell(t, 0, "converged") == 0);
    CHECK(cell(t, 0, "grid_M") == 64);
}

TEST_CASE("critical exponent fit over a decade") {
    temp_dir td("critexp");
    experiment_options o;
    o.output_dir = td.str();
    critical_exponent_params p;
    p.Ns = {40, 100, 400};
    p.seed = 1;
    auto a = run_critical_exponent(p, o);
    REQUIRE(a.csv_paths.size() == 2);
    auto fit = read_csv(a.csv_paths[1]);
    const double slope = cell(fit, 0, "slope");  // measured -1.3077
    CHECK(slope >= -1.8);
    CHECK(slope <= -1.2);
    CHECK(cell(fit, 0, "min_scaled_survival") >= 1.0);
    auto t = read_csv(a.csv_paths[0]);
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        CHECK(cell(t, r, "k") == k_of_alpha(std::exp(1.0), p.Ns[r]));

    p.Ns = {50, 100, 200};  // less than a decade
    CHECK_THROWS_AS(run_critical_exponent(p, o), std::invalid_argument);
    p.Ns = {40, 400};
    CHECK_THROWS_AS(run_critical_exponent(p, o), std::invalid_argument);
}

TEST_CASE("critical window scan uses the window depth rule") {
    temp_dir td("window");
    experiment_options o;
    o.output_dir = td.str();
    critical_window_params p;
    p.betas = {0.5, 3.0};
    p.Ns = {40, 80};
    p.seed = 1;
    auto a = run_critical_window(p, o);
    auto t = read_csv(a.csv_paths[0]);
    REQUIRE(t.rows.size() == 4);
    std::size_t r = 0;
    for (double beta : p.betas) {
        for (int N : p.Ns) {
            CHECK(cell(t, r, "beta") == beta);
            CHECK(cell(t, r, "N") == N);
            CHECK(cell(t, r, "k") == k_of_window(beta, N));
            const double s = cell(t, r, "survival");
            CHECK(s > 0.0);
            CHECK(s < 1.0);
            ++r;
        }
    }
    // Fewer generations (larger beta) can only help survival at fixed N.
    CHECK(cell(t, 3, "survival") > cell(t, 1, "survival"));

    p.betas = {200.0};  // k would be negative at N=40
    CHECK_THROWS_AS(run_critical_window(p, o), std::invalid_argument);
}

TEST_CASE("limit law statistics at N=10, lambda=0.5") {
    temp_dir td("limitlaw");
    experiment_options o;
    o.output_dir = td.str();
    limit_law_params p;
    p.N = 10;
    p.lambda = 0.5;
    p.replicates = 500;
    p.seed = 31415;
    auto a = run_limit_law(p, o);
    REQUIRE(a.csv_paths.size() == 2);
    auto data = read_csv(a.csv_paths[0]);
    REQUIRE(data.rows.size() == 500);
    auto st = read_csv(a.csv_paths[1]);
    const double mean = cell(st, 0, "sample_mean");
    const double se = cell(st, 0, "sample_se");
    const double exact = cell(st, 0, "exact_mean");
    CHECK(exact == doctest::Approx(std::pow(0.95, 10)).epsilon(1e-12));
    CHECK(std::fabs(mean - exact) <= 3.0 * se);
    CHECK(cell(st, 0, "ks_distance") <= 0.12);  // measured 0.0303
    CHECK(cell(st, 0, "exp_rate") == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    const double m2 = cell(st, 0, "normalized_m2");
    CHECK(m2 >= 1.5);
    CHECK(m2 <= 2.6);  // measured 2.02, reference 2

    // Cross-check the stats row against the replicate file.
    double acc = 0.0;
    for (std::size_t r = 0; r < data.rows.size(); ++r) acc += cell(data, r, "z_over_m");
    CHECK(acc / 500.0 == doctest::Approx(mean).epsilon(1e-12));

    const auto m = load_manifest(a.manifest_path);
    CHECK(m.experiment_name == "limit_law");
    CHECK(m.seed == 31415);
    CHECK(m.config.at("lambda").get<double>() == 0.5);
}

TEST_CASE("limit law aborts instead of writing a truncation-biased CSV") {
    temp_dir td("limitcap");
    experiment_options o;
    o.output_dir = td.str();
    limit_law_params p;
    p.N = 10;
    p.lambda = 0.0;
    p.replicates = 50;
    p.population_cap = 3;
    p.seed = 7;
    CHECK_THROWS_AS(run_limit_law(p, o), std::runtime_error);
    CHECK_FALSE(fs::exists(td.path / "limit_law.csv"));
    CHECK_FALSE(fs::exists(td.path / "limit_law_manifest.json"));
    p.lambda = 10.0;  // root fitness would be 1
    CHECK_THROWS_AS(run_limit_law(p, o), std::invalid_argument);
}

TEST_CASE("a manifest rerun reproduces every artifact byte for byte") {
    temp_dir ta("rerun_a");
    temp_dir tb("rerun_b");
    experiment_options oa;
    oa.output_dir = ta.str();
    oa.threads = 1;

    critical_window_params w;
    w.betas = {1.5};
    w.Ns = {30, 60};
    w.seed = 2024;
    auto first = run_critical_window(w, oa);

    experiment_options ob;
    ob.output_dir = tb.str();
    ob.threads = 3;  // different worker count must not change a byte
    auto second = rerun_from_manifest(first.manifest_path, ob);
    CHECK(second.experiment_name == "critical_window");
    REQUIRE(second.csv_paths.size() == first.csv_paths.size());
    for (std::size_t i = 0; i < first.csv_paths.size(); ++i)
        CHECK(slurp(second.csv_paths[i]) == slurp(first.csv_paths[i]));
    CHECK(slurp(second.manifest_path) == slurp(first.manifest_path));

    // Monte Carlo path: phase curve with a seed-dependent result.
    phase_curve_params p;
    p.alphas = {1.5};
    p.N = 8;
    p.replicates = 50;
    p.seed = 909090;
    auto mc_first = run_phase_curve(p, oa);
    auto mc_second = rerun_from_manifest(mc_first.manifest_path, ob);
    CHECK(slurp(mc_second.csv_paths[0]) == slurp(mc_first.csv_paths[0]));

    // Tampered manifests are rejected.
    auto m = load_manifest(first.manifest_path);
    m.experiment_name = "unheard_of";
    const std::string bad = (tb.path / "bad_manifest.json").string();
    save_manifest(bad, m);
    CHECK_THROWS_AS(rerun_from_manifest(bad, ob), std::runtime_error);
}
