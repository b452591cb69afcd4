#include "fastami/samplers.hpp"

#include "fastami/math.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace fastami {

AliasTable::AliasTable(std::span<const double> weights)
    : AliasTable(weights, [&] {
          std::vector<Count> v(weights.size());
          for (std::size_t i = 0; i < v.size(); ++i) {
              v[i] = static_cast<Count>(i);
          }
          return v;
      }()) {}

AliasTable::AliasTable(std::span<const double> weights, std::vector<Count> values) : values_(std::move(values)) {
    const std::size_t k = weights.size();
    if (k == 0) {
        throw std::invalid_argument("alias table: no weights");
    }
    if (values_.size() != k) {
        throw std::invalid_argument("alias table: weights and values differ in length");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("alias table: weights must be positive and finite");
        }
        sum += w;
    }
    probabilities_.resize(k);
    threshold_.resize(k);
    alias_.resize(k);
    std::vector<double> scaled(k);
    std::vector<std::uint32_t> small;
    std::vector<std::uint32_t> large;
    for (std::size_t i = 0; i < k; ++i) {
        probabilities_[i] = weights[i] / sum;
        scaled[i] = probabilities_[i] * static_cast<double>(k);
        alias_[i] = static_cast<std::uint32_t>(i);
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    // Vose: pair each under-full column with an over-full donor.
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        small.pop_back();
        const std::uint32_t l = large.back();
        threshold_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers are full up to rounding.
    for (std::uint32_t i : large) {
        threshold_[i] = 1.0;
    }
    for (std::uint32_t i : small) {
        threshold_[i] = 1.0;
    }
}

AliasTable AliasTable::cluster_sizes(const Marginals& m) {
    std::map<Count, double> freq;
    for (Count s : m.sizes()) {
        freq[s] += 1.0;
    }
    std::vector<double> weights;
    std::vector<Count> values;
    weights.reserve(freq.size());
    values.reserve(freq.size());
    for (const auto& [size, count] : freq) {
        values.push_back(size);
        weights.push_back(count);
    }
    return AliasTable(weights, std::move(values));
}

namespace {

// Overlap for a, b <= N / 2 by walking the CDF up from zero.
Count hypergeometric_inversion(Count a, Count b, Count N, Rng& rng) {
    const Count hi = std::min(a, b);
    double p = std::exp(log_hypergeometric_pmf(0, a, b, N));
    double u = rng.uniform();
    Count k = 0;
    while (u >= p && k < hi) {
        u -= p;
        p *= static_cast<double>(a - k) * static_cast<double>(b - k) /
             (static_cast<double>(k + 1) * static_cast<double>(N - a - b + k + 1));
        ++k;
    }
    return k;
}

// Ratio-of-uniforms (HRUA) for a, b <= N / 2, with a treated as
// the marked set and b as the sample size.
Count hypergeometric_hrua(Count a, Count b, Count N, Rng& rng) {
    constexpr double d1 = 1.7155277699214135;  // 2 sqrt(2/e)
    constexpr double d2 = 0.8989161620588988;  // 3 - 2 sqrt(3/e)
    const Count other = N - a;
    const double total = static_cast<double>(N);
    const double p = static_cast<double>(a) / total;
    const double q = static_cast<double>(other) / total;
    const double mu = static_cast<double>(b) * p;
    const double shift = mu + 0.5;
    const double var = static_cast<double>(N - b) * static_cast<double>(b) * p * q / (total - 1.0);
    const double c = std::sqrt(var + 0.5);
    const double h = d1 * c + d2;
    const Count mode = static_cast<Count>(
        std::floor(static_cast<double>(b + 1) * static_cast<double>(a + 1) / (total + 2.0)));
    const auto log_weight = [&](Count k) {
        return log_factorial(k) + log_factorial(a - k) + log_factorial(b - k) + log_factorial(other - b + k);
    };
    const double g = log_weight(mode);
    const double bound = std::min(static_cast<double>(std::min(a, b) + 1), std::floor(shift + 16.0 * c));

    while (true) {
        const double u = rng.uniform_pos();
        const double v = rng.uniform();
        const double x = shift + h * (v - 0.5) / u;
        if (x < 0.0 || x >= bound) {
            continue;
        }
        const Count k = static_cast<Count>(std::floor(x));
        const double t = g - log_weight(k);
        if (u * (4.0 - u) - 3.0 <= t) {
            return k;
        }
        if (u * (u - t) >= 1.0) {
            continue;
        }
        if (2.0 * std::log(u) <= t) {
            return k;
        }
    }
}

}  // namespace

Count hypergeometric_draw(Count a, Count b, Count N, Rng& rng) {
    if (N < 1 || a < 0 || b < 0 || a > N || b > N) {
        throw std::invalid_argument("hypergeometric: parameters out of range");
    }
    // Complementing either set maps the problem onto a, b <= N / 2.
    const bool flip_a = a > N - a;
    const bool flip_b = b > N - b;
    const Count ra = flip_a ? N - a : a;
    const Count rb = flip_b ? N - b : b;
    Count y = 0;
    if (ra > 0 && rb > 0) {
        y = std::min(ra, rb) < kHypergeometricInversionThreshold ? hypergeometric_inversion(ra, rb, N, rng)
                                                                 : hypergeometric_hrua(ra, rb, N, rng);
    }
    if (flip_a && flip_b) {
        return y - N + a + b;
    }
    if (flip_a) {
        return b - y;
    }
    if (flip_b) {
        return a - y;
    }
    return y;
}

PatefieldSampler::PatefieldSampler(const Marginals& rows, const Marginals& cols)
    : rows_(rows.sizes().begin(), rows.sizes().end()),
      cols_(cols.sizes().begin(), cols.sizes().end()),
      total_(rows.n_points()) {
    if (rows.n_points() != cols.n_points()) {
        throw std::invalid_argument("patefield: marginal totals differ");
    }
    const double cells = static_cast<double>(rows_.size()) * static_cast<double>(cols_.size());
    by_permutation_ = cells > 8.0 * static_cast<double>(total_);
    if (by_permutation_) {
        col_labels_.reserve(static_cast<std::size_t>(total_));
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            col_labels_.insert(col_labels_.end(), static_cast<std::size_t>(cols_[j]), static_cast<std::uint32_t>(j));
        }
        counts_.assign(cols_.size(), 0);
    }
}

SparseContingency patefield_table(const Marginals& rows, const Marginals& cols, Rng& rng) {
    PatefieldSampler sampler(rows, cols);
    std::vector<Cell> cells;
    sampler.sample(rng, [&](std::uint32_t r, std::uint32_t c, Count n) { cells.push_back({r, c, n}); });
    std::sort(cells.begin(), cells.end(),
              [](const Cell& x, const Cell& y) { return std::tie(x.row, x.col) < std::tie(y.row, y.col); });
    return SparseContingency::from_trusted(std::move(cells), rows, cols);
}

namespace {

// Expected sum of j * Z_j for Z_j ~ Geometric(1 - e^{-j t}), j = 1..k.
double boltzmann_mean(double t, Count k) {
    double mean = 0.0;
    for (Count j = 1; j <= k; ++j) {
        const double jt = static_cast<double>(j) * t;
        if (jt > 700.0) {
            break;
        }
        mean += static_cast<double>(j) / std::expm1(jt);
    }
    return mean;
}

// Solves boltzmann_mean(t, k) = target for t > 0 by bisection in log t.
double boltzmann_parameter(Count target, Count k) {
    double lo = std::log(1e-12);
    double hi = std::log(50.0);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (boltzmann_mean(std::exp(mid), k) > static_cast<double>(target)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace

Marginals uniform_partition(Count N, Count parts, Rng& rng) {
    if (parts < 1 || parts > N) {
        throw std::invalid_argument("uniform_partition: need 1 <= parts <= N");
    }
    if (parts == 1) {
        return Marginals({N});
    }
    const Count excess = N - parts;
    if (excess == 0) {
        return Marginals(std::vector<Count>(static_cast<std::size_t>(parts), 1));
    }
    // Target: partitions of `excess` with parts <= max_part (conjugate of at
    // most `parts` parts). Larger parts cannot occur.
    const Count max_part = std::min(parts, excess);
    const double t = boltzmann_parameter(excess, max_part);

    std::vector<Count> multiplicity(static_cast<std::size_t>(max_part) + 1, 0);
    while (true) {
        Count used = 0;
        bool overflow = false;
        for (Count j = max_part; j >= 2; --j) {
            const auto z = static_cast<Count>(std::floor(-std::log(rng.uniform_pos()) / (static_cast<double>(j) * t)));
            if (z > (excess - used) / j) {
                overflow = true;
                break;
            }
            multiplicity[static_cast<std::size_t>(j)] = z;
            used += j * z;
        }
        if (overflow) {
            continue;
        }
        // Ones fill the rest; accept with P(Z_1 = ones) / P(Z_1 = 0).
        const Count ones = excess - used;
        if (rng.uniform() >= std::exp(-t * static_cast<double>(ones))) {
            continue;
        }
        multiplicity[1] = ones;
        break;
    }

    // Conjugate and shift back: part i is 1 + #(parts of size >= i).
    std::vector<Count> sizes(static_cast<std::size_t>(parts), 1);
    Count at_least = 0;
    for (Count i = max_part; i >= 1; --i) {
        at_least += multiplicity[static_cast<std::size_t>(i)];
        sizes[static_cast<std::size_t>(i - 1)] += at_least;
    }
    return Marginals(std::move(sizes));
}

}  // namespace fastami
