#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace accper {

// Sample mean and its standard error.
struct mean_se {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

mean_se sample_mean_se(const std::vector<double>& xs);

// Kolmogorov-Smirnov sup-distance between the empirical CDF of `xs` and the
// Exp(rate) CDF 1 - exp(-rate * x).
double ks_distance_exponential(std::vector<double> xs, double rate);

struct chi_square_result {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int bins_used = 0;  // after pooling
};

// Two-sample chi-square test on aligned histograms. Adjacent bins are pooled
// (from the right tail inward) until every pooled bin holds at least
// `min_combined` counts across both samples.
chi_square_result chi_square_two_sample(const std::vector<long long>& a,
                                        const std::vector<long long>& b,
                                        long long min_combined = 10);

// Goodness-of-fit chi-square of observed bin counts against expected
// probabilities (need not sum to 1: the remainder forms an implicit tail bin).
// Bins with expected count < `min_expected` are pooled into the tail.
chi_square_result chi_square_gof(const std::vector<long long>& observed,
                                 const std::vector<double>& probs,
                                 double min_expected = 5.0);

// Upper-tail chi-square probability P[X >= x] with `dof` degrees of freedom.
double chi_square_sf(double x, int dof);

}  // namespace accper
