#pragma once

// Small statistical helpers shared by the unit and acceptance suites.

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace fastami::test {

/// Pearson chi-square goodness of fit; returns the upper-tail p-value.
/// Bins with expected count below 5 are pooled into one bin.
inline double chi_square_p(std::span<const std::uint64_t> observed, std::span<const double> probabilities) {
    if (observed.size() != probabilities.size()) {
        throw std::invalid_argument("chi_square_p: size mismatch");
    }
    const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
    double stat = 0.0;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    int bins = 0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        const double expected = probabilities[k] * total;
        if (expected < 5.0) {
            pooled_obs += static_cast<double>(observed[k]);
            pooled_exp += expected;
            continue;
        }
        const double d = static_cast<double>(observed[k]) - expected;
        stat += d * d / expected;
        ++bins;
    }
    if (pooled_exp > 0.0) {
        const double d = pooled_obs - pooled_exp;
        stat += d * d / std::max(pooled_exp, 1e-300);
        ++bins;
    }
    if (bins < 2) {
        return 1.0;
    }
    boost::math::chi_squared dist(bins - 1);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Exact hypergeometric PMF over k = 0..min(a, b) from lgamma: overlap of a
/// fixed a-subset with a random b-subset of n points.
inline std::vector<double> hypergeometric_pmf(std::int64_t a, std::int64_t b, std::int64_t n) {
    const auto lchoose = [](double x, double y) {
        return std::lgamma(x + 1.0) - std::lgamma(y + 1.0) - std::lgamma(x - y + 1.0);
    };
    const std::int64_t top = std::min(a, b);
    std::vector<double> p(static_cast<std::size_t>(top) + 1, 0.0);
    for (std::int64_t k = 0; k <= top; ++k) {
        if (b - k > n - a) continue;
        p[static_cast<std::size_t>(k)] =
            std::exp(lchoose(static_cast<double>(a), static_cast<double>(k)) +
                     lchoose(static_cast<double>(n - a), static_cast<double>(b - k)) -
                     lchoose(static_cast<double>(n), static_cast<double>(b)));
    }
    return p;
}

inline std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) {
            ++j;
        }
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

inline double mean(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); }

inline double median(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

/// One-sample t-test of H1: mean > 0; returns the one-sided p-value.
inline double t_test_greater_p(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd == 0.0) {
        return m > 0.0 ? 0.0 : 1.0;
    }
    const double t = m / (sd / std::sqrt(n));
    boost::math::students_t dist(n - 1.0);
    return boost::math::cdf(boost::math::complement(dist, t));
}

/// Two-sample Kolmogorov-Smirnov test, asymptotic p-value.
inline double ks_two_sample_p(std::vector<double> x, std::vector<double> y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    const double ne = nx * ny / (nx + ny);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Mann-Kendall trend test (no tie correction); one-sided p for an
/// increasing trend.
inline double mann_kendall_increasing_p(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            s += (x[j] > x[i]) - (x[j] < x[i]);
        }
    }
    const double var = n * (n - 1.0) * (2.0 * n + 5.0) / 18.0;
    const double z = s > 0 ? (s - 1.0) / std::sqrt(var) : (s < 0 ? (s + 1.0) / std::sqrt(var) : 0.0);
    boost::math::normal standard;
    return boost::math::cdf(boost::math::complement(standard, z));
}

}  // namespace fastami::test
