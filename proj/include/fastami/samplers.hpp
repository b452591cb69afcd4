#pragma once

#include "fastami/rng.hpp"
#include "fastami/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fastami {

/// Walker/Vose alias table: O(1) draws from a fixed discrete distribution.
class AliasTable {
public:
    /// Weights must be non-empty, finite and > 0. Outcome k has value k.
    explicit AliasTable(std::span<const double> weights);

    /// Same, with an explicit value per outcome (e.g. a cluster size).
    AliasTable(std::span<const double> weights, std::vector<Count> values);

    /// Distribution of cluster sizes in m: outcomes are the distinct sizes,
    /// weighted by how many clusters have that size.
    static AliasTable cluster_sizes(const Marginals& m);

    /// Index of the drawn outcome.
    std::size_t draw_index(Rng& rng) const noexcept {
        const std::size_t i = static_cast<std::size_t>(rng.bounded(threshold_.size()));
        return rng.uniform() < threshold_[i] ? i : alias_[i];
    }

    /// Value of the drawn outcome.
    Count draw(Rng& rng) const noexcept { return values_[draw_index(rng)]; }

    [[nodiscard]] std::size_t size() const noexcept { return threshold_.size(); }
    [[nodiscard]] std::span<const double> probabilities() const noexcept { return probabilities_; }
    [[nodiscard]] std::span<const Count> values() const noexcept { return values_; }

private:
    std::vector<double> probabilities_;
    std::vector<double> threshold_;
    std::vector<std::uint32_t> alias_;
    std::vector<Count> values_;
};

/// Overlap of a fixed set of `a` points with a uniformly random subset of
/// `b` out of N points. Inversion (CDF walk) when the reduced parameters are
/// small, ratio-of-uniforms rejection (HRUA) otherwise.
/// Throws std::invalid_argument unless 0 <= a, b <= N and N >= 1.
Count hypergeometric_draw(Count a, Count b, Count N, Rng& rng);

/// Uniform Fisher-Yates shuffle driven by Rng::bounded.
template <class T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(items[i - 1], items[j]);
    }
}

/// Below this value of min(a, b, N - a, N - b) the CDF walk is used.
inline constexpr Count kHypergeometricInversionThreshold = 10;

/// Random table with the given margins under the permutation model,
/// filled row by row with conditional hypergeometric draws.
/// Throws std::invalid_argument if the totals differ.
SparseContingency patefield_table(const Marginals& rows, const Marginals& cols, Rng& rng);

/// Reusable workspace variant used in hot loops: calls visit(row, col, n)
/// for every nonzero cell. Rows are visited in order; columns within a row
/// in no particular order. When R*C exceeds 8N the table is built from a
/// shuffled column-label sequence instead (same distribution, O(N) per draw).
class PatefieldSampler {
public:
    PatefieldSampler(const Marginals& rows, const Marginals& cols);

    template <class Visit>
    void sample(Rng& rng, Visit&& visit);

private:
    template <class Visit>
    void sample_by_permutation(Rng& rng, Visit&& visit);

    std::vector<Count> rows_;
    std::vector<Count> cols_;
    Count total_ = 0;
    // Sequential hypergeometric fill.
    std::vector<Count> remaining_;
    std::vector<std::uint32_t> active_;
    // Shuffled column labels, used when R*C is large relative to N.
    bool by_permutation_ = false;
    std::vector<std::uint32_t> col_labels_;
    std::vector<Count> counts_;
    std::vector<std::uint32_t> touched_;
};

/// Uniformly random partition of N into exactly `parts` positive parts,
/// returned non-increasing. Throws std::invalid_argument unless
/// 1 <= parts <= N.
///
/// Shifting each part down by one and conjugating maps the target set onto
/// partitions of N - parts with every part at most `parts`. Those are drawn
/// by Boltzmann sampling with independent geometric multiplicities and
/// probabilistic divide-and-conquer: the multiplicity of 1 is deduced and
/// accepted with its relative probability.
Marginals uniform_partition(Count N, Count parts, Rng& rng);

template <class Visit>
void PatefieldSampler::sample(Rng& rng, Visit&& visit) {
    if (by_permutation_) {
        sample_by_permutation(rng, visit);
        return;
    }
    const std::size_t n_cols = cols_.size();
    remaining_.assign(cols_.begin(), cols_.end());
    active_.resize(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) {
        active_[j] = static_cast<std::uint32_t>(j);
    }
    std::size_t n_active = n_cols;
    Count unassigned = total_;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        Count left = rows_[i];
        Count pool = unassigned;
        unassigned -= left;
        // Each column's share of this row is hypergeometric given the points
        // not yet placed in earlier columns.
        std::size_t k = 0;
        while (left > 0) {
            const std::uint32_t j = active_[k];
            const Count col_left = remaining_[j];
            const Count n = pool == col_left ? left : hypergeometric_draw(col_left, left, pool, rng);
            pool -= col_left;
            if (n > 0) {
                visit(static_cast<std::uint32_t>(i), j, n);
                left -= n;
                remaining_[j] -= n;
            }
            if (remaining_[j] == 0) {
                active_[k] = active_[--n_active];
            } else {
                ++k;
            }
        }
    }
}

template <class Visit>
void PatefieldSampler::sample_by_permutation(Rng& rng, Visit&& visit) {
    shuffle(std::span<std::uint32_t>(col_labels_), rng);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        touched_.clear();
        for (Count t = 0; t < rows_[i]; ++t, ++pos) {
            const std::uint32_t j = col_labels_[pos];
            if (counts_[j]++ == 0) {
                touched_.push_back(j);
            }
        }
        for (std::uint32_t j : touched_) {
            visit(static_cast<std::uint32_t>(i), j, counts_[j]);
            counts_[j] = 0;
        }
    }
}

}  // namespace fastami
