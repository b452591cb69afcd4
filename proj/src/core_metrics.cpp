#include "fastami/core_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fastami {

namespace {

void require_same_length(const Clustering& u, const Clustering& v) {
    if (u.n_points() != v.n_points()) {
        throw std::invalid_argument("clusterings have different lengths (" + std::to_string(u.n_points()) +
                                    " vs " + std::to_string(v.n_points()) + ")");
    }
}

std::vector<std::uint64_t> sorted_pair_keys(const Clustering& u, const Clustering& v) {
    require_same_length(u, v);
    const auto lu = u.labels();
    const auto lv = v.labels();
    std::vector<std::uint64_t> keys(lu.size());
    for (std::size_t i = 0; i < lu.size(); ++i) {
        keys[i] = (static_cast<std::uint64_t>(lu[i]) << 32) | lv[i];
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

// Calls visit(row, col, count) for each nonzero cell in (row, col) order.
template <class Visit>
void for_each_run(const std::vector<std::uint64_t>& keys, Visit&& visit) {
    std::size_t i = 0;
    while (i < keys.size()) {
        std::size_t j = i + 1;
        while (j < keys.size() && keys[j] == keys[i]) {
            ++j;
        }
        visit(static_cast<std::uint32_t>(keys[i] >> 32), static_cast<std::uint32_t>(keys[i] & 0xffffffffULL),
              static_cast<Count>(j - i));
        i = j;
    }
}

}  // namespace

SparseContingency contingency_from_labels(const Clustering& u, const Clustering& v) {
    const auto keys = sorted_pair_keys(u, v);
    std::vector<Cell> cells;
    for_each_run(keys, [&](std::uint32_t r, std::uint32_t c, Count n) { cells.push_back({r, c, n}); });
    return SparseContingency::from_trusted(std::move(cells), u.marginals(), v.marginals());
}

double mutual_information(const SparseContingency& table) {
    const auto rows = table.row_marginals().sizes();
    const auto cols = table.col_marginals().sizes();
    const double total = static_cast<double>(table.n_points());
    double mi = 0.0;
    for (const Cell& c : table.cells()) {
        mi += cell_information(c.count, rows[c.row], cols[c.col], total);
    }
    return std::max(mi, 0.0);
}

double mutual_information(const Clustering& u, const Clustering& v) {
    const auto keys = sorted_pair_keys(u, v);
    const Marginals mu = u.marginals();
    const Marginals mv = v.marginals();
    const double total = static_cast<double>(u.n_points());
    double mi = 0.0;
    for_each_run(keys, [&](std::uint32_t r, std::uint32_t c, Count n) {
        mi += cell_information(n, mu[r], mv[c], total);
    });
    return std::max(mi, 0.0);
}

double entropy(const Marginals& m) {
    const double total = static_cast<double>(m.n_points());
    double h = 0.0;
    for (Count a : m.sizes()) {
        const double da = static_cast<double>(a);
        h += da / total * std::log(total / da);
    }
    return h;
}

double normalizer_value(Normalizer kind, double h_u, double h_v) {
    switch (kind) {
        case Normalizer::ArithmeticMean: return (h_u + h_v) / 2.0;
        case Normalizer::GeometricMean: return std::sqrt(h_u * h_v);
        case Normalizer::Minimum: return std::min(h_u, h_v);
        case Normalizer::Maximum: return std::max(h_u, h_v);
    }
    return (h_u + h_v) / 2.0;
}

double emi_exact(const Marginals& a, const Marginals& b, const Deadline& deadline) {
    const Count n_total = a.n_points();
    if (b.n_points() != n_total) {
        throw std::invalid_argument("emi_exact: marginal totals differ");
    }
    if (a.n_clusters() == 1 || b.n_clusters() == 1) {
        return 0.0;
    }
    const double total = static_cast<double>(n_total);
    const double log_total = std::log(total);

    const Count max_size = std::max(*std::max_element(a.sizes().begin(), a.sizes().end()),
                                    *std::max_element(b.sizes().begin(), b.sizes().end()));
    std::vector<double> log_n(static_cast<std::size_t>(max_size) + 1, 0.0);
    for (Count n = 1; n <= max_size; ++n) {
        log_n[static_cast<std::size_t>(n)] = std::log(static_cast<double>(n));
    }
    std::vector<double> lfact(static_cast<std::size_t>(n_total) + 1);
    for (Count k = 0; k <= n_total; ++k) {
        lfact[static_cast<std::size_t>(k)] = log_factorial(k);
    }
    const auto lf = [&](Count k) { return lfact[static_cast<std::size_t>(k)]; };

    double emi = 0.0;
    for (Count ai : a.sizes()) {
        if (expired(deadline)) {
            throw TimeLimitExceeded();
        }
        const double log_a = log_n[static_cast<std::size_t>(ai)];
        for (Count bj : b.sizes()) {
            const double log_b = log_n[static_cast<std::size_t>(bj)];
            const double fixed = lf(ai) + lf(bj) + lf(n_total - ai) + lf(n_total - bj) - lf(n_total);
            const Count lo = std::max<Count>(1, ai + bj - n_total);
            const Count hi = std::min(ai, bj);
            for (Count n = lo; n <= hi; ++n) {
                const double info = static_cast<double>(n) / total *
                                    (log_total + log_n[static_cast<std::size_t>(n)] - log_a - log_b);
                const double log_p = fixed - lf(n) - lf(ai - n) - lf(bj - n) - lf(n_total - ai - bj + n);
                emi += info * std::exp(log_p);
            }
        }
    }
    return std::max(emi, 0.0);
}

Adjusted adjust_for_chance(double mi, double h_u, double h_v, double emi, Normalizer norm) {
    if (h_u == 0.0 && h_v == 0.0) {
        return {1.0, true};
    }
    const double denominator = normalizer_value(norm, h_u, h_v) - emi;
    if (std::abs(denominator) < 1e-12) {
        return {0.0, true};
    }
    return {(mi - emi) / denominator, false};
}

Adjusted ami(const Clustering& u, const Clustering& v, Normalizer norm, double emi) {
    return adjust_for_chance(mutual_information(u, v), entropy(u.marginals()), entropy(v.marginals()), emi, norm);
}

Adjusted exact_ami(const Clustering& u, const Clustering& v, Normalizer norm, const Deadline& deadline) {
    require_same_length(u, v);
    return ami(u, v, norm, emi_exact(u.marginals(), v.marginals(), deadline));
}

double pairwise_emi(const Clustering& u, const Clustering& v) {
    require_same_length(u, v);
    if (u.n_points() < 2) {
        throw std::invalid_argument("pairwise_emi: needs at least two points");
    }
    const SparseContingency table = contingency_from_labels(u, v);
    const auto rows = table.row_marginals().sizes();
    const auto cols = table.col_marginals().sizes();
    const Count n_total = table.n_points();
    const double total = static_cast<double>(n_total);

    // f(n) for a cell with margins a, b; the swap delta of a cell is
    // f(n - 1) - f(n) when it loses a point and f(n + 1) - f(n) when it gains one.
    double mi = 0.0;
    double losing = 0.0;
    double gaining = 0.0;
    for (const Cell& c : table.cells()) {
        const Count a = rows[c.row];
        const Count b = cols[c.col];
        const Count n = c.count;
        const double here = cell_information(n, a, b, total);
        mi += here;
        // Partners of a point in this cell that share neither its row nor column.
        const double partners = static_cast<double>(n_total - a - b + n);
        losing += static_cast<double>(n) * (cell_information(n - 1, a, b, total) - here) * partners;
        // Gain at (r, c) arises from pairs (r, c') x (r', c): (a - n)(b - n) of them.
        const double gain_here = cell_information(n + 1, a, b, total) - here;
        const double gain_empty = cell_information(1, a, b, total);
        gaining += gain_here * static_cast<double>(a - n) * static_cast<double>(b - n) -
                   gain_empty * static_cast<double>(a) * static_cast<double>(b);
    }
    // Gain summed over all positions as if every cell were empty:
    // sum_rc a_r b_c (1/N) log(N / (a_r b_c)) = N log N - sum a log a - sum b log b.
    double all_empty = total * std::log(total);
    for (Count a : rows) {
        all_empty -= static_cast<double>(a) * std::log(static_cast<double>(a));
    }
    for (Count b : cols) {
        all_empty -= static_cast<double>(b) * std::log(static_cast<double>(b));
    }
    gaining += all_empty;

    const double n_transpositions = total * (total - 1.0) / 2.0;
    return mi + (losing + gaining) / n_transpositions;
}

Adjusted pairwise_ami(const Clustering& u, const Clustering& v, Normalizer norm) {
    return ami(u, v, norm, pairwise_emi(u, v));
}

double balance(std::span<const Clustering> clusterings) {
    if (clusterings.empty()) {
        throw std::invalid_argument("balance: empty set of clusterings");
    }
    double sum = 0.0;
    for (const Clustering& u : clusterings) {
        if (u.n_clusters() > 1) {
            sum += entropy(u.marginals()) / std::log(static_cast<double>(u.n_clusters()));
        }
    }
    return sum / static_cast<double>(clusterings.size());
}

}  // namespace fastami
