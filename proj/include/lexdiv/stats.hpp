#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "lexdiv/errors.hpp"

namespace lexdiv::stats {

// Percentile by linear interpolation between closest ranks.
inline double percentile(std::vector<double> values, double cut) {
    if (values.empty()) throw data_error("percentile: empty sample");
    if (cut < 0.0 || cut > 100.0)
        throw config_error("percentile: cut outside [0,100]");
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values.front();
    const double pos = cut / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

// 1-based ranks with average tie handling.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw data_error("correlation undefined: an input has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

inline double two_sided_t_pvalue(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    const boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

struct correlation {
    double rho;
    double p_value;
    std::size_t n;
};

// Spearman rank correlation with average-rank ties; two-sided p-value from
// the t-distribution approximation t = rho * sqrt((n-2) / (1-rho^2)).
inline correlation spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw config_error("spearman: samples differ in length");
    if (x.size() < 3) throw data_error("spearman: need at least 3 observations");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    double rho = pearson(rx, ry);
    rho = std::clamp(rho, -1.0, 1.0);
    const auto n = static_cast<double>(x.size());
    double p = 0.0;
    if (1.0 - rho * rho > 0.0) {
        const double t = rho * std::sqrt((n - 2.0) / (1.0 - rho * rho));
        p = two_sided_t_pvalue(t, n - 2.0);
    }
    return {rho, p, x.size()};
}

struct welch_result {
    double t;
    double p_value;
    double df;
    double mean_a;
    double mean_b;
    std::size_t n_a;
    std::size_t n_b;
};

// Welch's two-sample, two-sided t-test with Welch-Satterthwaite degrees of
// freedom.
inline welch_result welch_t_test(const std::vector<double>& a,
                                 const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw data_error("welch: need at least 2 observations per sample");
    const auto mean_var = [](const std::vector<double>& v) {
        const auto n = static_cast<double>(v.size());
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double ss = 0.0;
        for (const double x : v) ss += (x - m) * (x - m);
        return std::pair<double, double>{m, ss / (n - 1.0)};
    };
    const auto [ma, va] = mean_var(a);
    const auto [mb, vb] = mean_var(b);
    const double sa = va / static_cast<double>(a.size());
    const double sb = vb / static_cast<double>(b.size());
    if (sa + sb == 0.0)
        throw data_error("welch: zero variance in both samples");
    const double t = (ma - mb) / std::sqrt(sa + sb);
    const double df = (sa + sb) * (sa + sb) /
                      (sa * sa / (static_cast<double>(a.size()) - 1.0) +
                       sb * sb / (static_cast<double>(b.size()) - 1.0));
    return {t, two_sided_t_pvalue(t, df), df, ma, mb, a.size(), b.size()};
}

}  // namespace lexdiv::stats
