#include "fastami/oracle.hpp"

#include "fastami/math.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace fastami::oracle {

ExactMoments bruteforce_moments(const Marginals& a, const Marginals& b) {
    const Count n_total = a.n_points();
    if (b.n_points() != n_total) {
        throw std::invalid_argument("bruteforce_moments: marginal totals differ");
    }
    if (n_total > kMaxBruteForcePoints) {
        throw std::invalid_argument("bruteforce_moments: N too large for enumeration");
    }
    const std::size_t n_rows = a.n_clusters();
    const std::size_t n_cols = b.n_clusters();
    const double total = static_cast<double>(n_total);

    double log_margin = -log_factorial(n_total);
    for (Count s : a.sizes()) log_margin += log_factorial(s);
    for (Count s : b.sizes()) log_margin += log_factorial(s);

    std::vector<Count> table(n_rows * n_cols, 0);
    std::vector<Count> col_left(b.sizes().begin(), b.sizes().end());
    ExactMoments out;

    const auto finish_table = [&] {
        double log_p = log_margin;
        double mi = 0.0;
        for (std::size_t i = 0; i < n_rows; ++i) {
            for (std::size_t j = 0; j < n_cols; ++j) {
                const Count n = table[i * n_cols + j];
                log_p -= log_factorial(n);
                if (n > 0) {
                    const double dn = static_cast<double>(n);
                    mi += dn / total * std::log(total * dn / (static_cast<double>(a[i]) * static_cast<double>(b[j])));
                }
            }
        }
        const double p = std::exp(log_p);
        out.e_i += p * mi;
        out.e_i2 += p * mi * mi;
        out.total_probability += p;
        ++out.n_tables;
    };

    // Fill cell (i, j) given the row's remaining count; the last column of a
    // row takes whatever is left, the last row is forced by col_left.
    std::function<void(std::size_t, std::size_t, Count)> fill = [&](std::size_t i, std::size_t j, Count row_left) {
        if (i == n_rows - 1) {
            for (std::size_t q = 0; q < n_cols; ++q) {
                table[i * n_cols + q] = col_left[q];
            }
            finish_table();
            return;
        }
        if (j == n_cols - 1) {
            if (row_left > col_left[j]) {
                return;
            }
            table[i * n_cols + j] = row_left;
            col_left[j] -= row_left;
            fill(i + 1, 0, a[i + 1]);
            col_left[j] += row_left;
            return;
        }
        const Count hi = std::min(row_left, col_left[j]);
        for (Count n = 0; n <= hi; ++n) {
            table[i * n_cols + j] = n;
            col_left[j] -= n;
            fill(i, j + 1, row_left - n);
            col_left[j] += n;
        }
    };
    fill(0, 0, a[0]);

    out.var_i = out.e_i2 - out.e_i * out.e_i;
    return out;
}

std::vector<Marginals> enumerate_partitions(Count N, Count parts) {
    if (parts < 1 || parts > N || N > 60) {
        throw std::invalid_argument("enumerate_partitions: need 1 <= parts <= N <= 60");
    }
    std::vector<Marginals> out;
    std::vector<Count> current;
    std::function<void(Count, Count, Count)> rec = [&](Count left, Count slots, Count max_part) {
        if (slots == 0) {
            if (left == 0) {
                out.emplace_back(current);
            }
            return;
        }
        // Each remaining slot needs at least 1.
        const Count hi = std::min(max_part, left - (slots - 1));
        for (Count p = hi; p >= 1 && p * slots >= left; --p) {
            current.push_back(p);
            rec(left - p, slots - 1, p);
            current.pop_back();
        }
    };
    rec(N, parts, N);
    return out;
}

std::uint64_t count_partitions(Count N, Count parts) {
    if (parts < 0 || N < 0) {
        return 0;
    }
    std::vector<std::vector<std::uint64_t>> p(static_cast<std::size_t>(N) + 1,
                                              std::vector<std::uint64_t>(static_cast<std::size_t>(parts) + 1, 0));
    p[0][0] = 1;
    for (Count n = 1; n <= N; ++n) {
        for (Count k = 1; k <= std::min(n, parts); ++k) {
            p[n][k] = p[n - 1][k - 1] + p[n - k][k];
        }
    }
    return p[N][parts];
}

}  // namespace fastami::oracle
