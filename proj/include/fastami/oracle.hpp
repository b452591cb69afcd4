#pragma once

#include "fastami/types.hpp"

#include <vector>

/// Brute-force references for tiny instances. Slow on purpose; used by the
/// test suites and available to downstream tests.
namespace fastami::oracle {

/// Exact moments of I under the random permutation model.
struct ExactMoments {
    double e_i = 0.0;    ///< E{I | A, B}
    double e_i2 = 0.0;   ///< E{I^2 | A, B}
    double var_i = 0.0;  ///< e_i2 - e_i^2
    double total_probability = 0.0;
    std::size_t n_tables = 0;
};

inline constexpr Count kMaxBruteForcePoints = 10;

/// Enumerates every contingency table with margins (A, B), weighting each by
/// prod a_i! prod b_j! / (N! prod n_ij!). Throws std::invalid_argument when
/// N > kMaxBruteForcePoints or the totals differ.
[[nodiscard]] ExactMoments bruteforce_moments(const Marginals& a, const Marginals& b);

/// All partitions of N into exactly `parts` positive parts, each
/// non-increasing, in reverse lexicographic order. Throws
/// std::invalid_argument unless 1 <= parts <= N <= 60.
[[nodiscard]] std::vector<Marginals> enumerate_partitions(Count N, Count parts);

/// Number of partitions of N into exactly `parts` parts, from the recurrence
/// p(n, k) = p(n - 1, k - 1) + p(n - k, k).
[[nodiscard]] std::uint64_t count_partitions(Count N, Count parts);

}  // namespace fastami::oracle
