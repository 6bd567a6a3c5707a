#include "accper/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace accper {

mean_se sample_mean_se(const std::vector<double>& xs) {
    mean_se out;
    out.n = xs.size();
    if (xs.empty()) return out;
    out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() < 2) return out;
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - out.mean;
        ss += d * d;
    }
    const double var = ss / static_cast<double>(xs.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(xs.size()));
    return out;
}

double ks_distance_exponential(std::vector<double> xs, double rate) {
    if (xs.empty()) throw std::invalid_argument("ks_distance_exponential: empty sample");
    if (!(rate > 0.0)) throw std::invalid_argument("ks_distance_exponential: rate must be > 0");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = -std::expm1(-rate * xs[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(std::abs(f - lo), std::abs(hi - f)));
    }
    return d;
}

double chi_square_sf(double x, int dof) {
    if (dof < 1) throw std::invalid_argument("chi_square_sf: dof must be >= 1");
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

chi_square_result chi_square_two_sample(const std::vector<long long>& a,
                                        const std::vector<long long>& b,
                                        long long min_combined) {
    if (a.empty() && b.empty())
        throw std::invalid_argument("chi_square_two_sample: empty histograms");
    const std::size_t len = std::max(a.size(), b.size());
    auto at = [](const std::vector<long long>& v, std::size_t i) -> long long {
        return i < v.size() ? v[i] : 0;
    };
    // Pool adjacent bins so each pooled bin has at least min_combined counts
    // overall; a deficient trailing bin merges into its predecessor.
    std::vector<long long> pa, pb;
    long long ca = 0, cb = 0;
    for (std::size_t i = 0; i < len; ++i) {
        ca += at(a, i);
        cb += at(b, i);
        if (ca + cb >= min_combined) {
            pa.push_back(ca);
            pb.push_back(cb);
            ca = cb = 0;
        }
    }
    if (ca + cb > 0) {
        if (pa.empty()) {
            pa.push_back(ca);
            pb.push_back(cb);
        } else {
            pa.back() += ca;
            pb.back() += cb;
        }
    }
    if (pa.size() < 2)
        throw std::invalid_argument("chi_square_two_sample: fewer than 2 pooled bins");
    const double na = static_cast<double>(std::accumulate(pa.begin(), pa.end(), 0LL));
    const double nb = static_cast<double>(std::accumulate(pb.begin(), pb.end(), 0LL));
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("chi_square_two_sample: a sample is empty");
    chi_square_result res;
    res.bins_used = static_cast<int>(pa.size());
    // Standard two-sample statistic: sum over bins of
    // (sqrt(nb/na)*a_i - sqrt(na/nb)*b_i)^2 / (a_i + b_i).
    const double ra = std::sqrt(nb / na), rb = std::sqrt(na / nb);
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double tot = static_cast<double>(pa[i] + pb[i]);
        if (tot == 0.0) continue;
        const double d = ra * static_cast<double>(pa[i]) - rb * static_cast<double>(pb[i]);
        res.statistic += d * d / tot;
    }
    res.dof = res.bins_used - 1;
    res.p_value = chi_square_sf(res.statistic, res.dof);
    return res;
}

chi_square_result chi_square_gof(const std::vector<long long>& observed,
                                 const std::vector<double>& probs,
                                 double min_expected) {
    if (observed.empty()) throw std::invalid_argument("chi_square_gof: empty observations");
    const double n =
        static_cast<double>(std::accumulate(observed.begin(), observed.end(), 0LL));
    if (n == 0.0) throw std::invalid_argument("chi_square_gof: zero total count");
    const std::size_t len = std::max(observed.size(), probs.size());
    auto obs_at = [&](std::size_t i) -> long long {
        return i < observed.size() ? observed[i] : 0;
    };
    auto p_at = [&](std::size_t i) -> double { return i < probs.size() ? probs[i] : 0.0; };
    double p_total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) p_total += probs[i];
    std::vector<long long> po;
    std::vector<double> pe;
    long long co = 0;
    double ce = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        co += obs_at(i);
        ce += n * p_at(i);
        if (ce >= min_expected) {
            po.push_back(co);
            pe.push_back(ce);
            co = 0;
            ce = 0.0;
        }
    }
    // Implicit tail bin: leftover listed bins plus any probability mass beyond
    // the listed range.
    const double tail_e = ce + n * std::max(0.0, 1.0 - p_total);
    if (co > 0 || tail_e > 0.0) {
        if (tail_e >= min_expected || po.empty()) {
            po.push_back(co);
            pe.push_back(tail_e);
        } else {
            po.back() += co;
            pe.back() += tail_e;
        }
    }
    if (po.size() < 2) throw std::invalid_argument("chi_square_gof: fewer than 2 pooled bins");
    chi_square_result res;
    res.bins_used = static_cast<int>(po.size());
    for (std::size_t i = 0; i < po.size(); ++i) {
        if (pe[i] <= 0.0) {
            if (po[i] > 0) res.statistic = 1e300;  // observed mass where none expected
            continue;
        }
        const double d = static_cast<double>(po[i]) - pe[i];
        res.statistic += d * d / pe[i];
    }
    res.dof = res.bins_used - 1;
    res.p_value = chi_square_sf(res.statistic, res.dof);
    return res;
}

}  // namespace accper
