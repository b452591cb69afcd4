#pragma once

#include "fastami/math.hpp"
#include "fastami/types.hpp"

#include <cmath>
#include <span>

/// Closed-form clustering comparison quantities. All values are in nats.
namespace fastami {

/// Contribution (n/N) log(N n / (a b)) of one cell with margins a, b; zero
/// for n = 0. Entropy uses the same operation order, which keeps I(u,u)
/// bit-identical to H(u).
inline double cell_information(Count n, Count a, Count b, double total) noexcept {
    if (n == 0) {
        return 0.0;
    }
    const double dn = static_cast<double>(n);
    return dn / total * std::log((total * dn) / (static_cast<double>(a) * static_cast<double>(b)));
}

/// Sparse overlap table of two clusterings, built by sorting the label-pair
/// stream. Throws std::invalid_argument on length mismatch.
[[nodiscard]] SparseContingency contingency_from_labels(const Clustering& u, const Clustering& v);

/// I(u,v) = sum (n_ij/N) log(N n_ij / (a_i b_j)) over nonzero cells.
[[nodiscard]] double mutual_information(const SparseContingency& table);

/// Same value as mutual_information(contingency_from_labels(u, v)) without
/// keeping the cell list.
[[nodiscard]] double mutual_information(const Clustering& u, const Clustering& v);

/// H = -sum (a/N) log(a/N).
[[nodiscard]] double entropy(const Marginals& m);

[[nodiscard]] double normalizer_value(Normalizer kind, double h_u, double h_v);

/// Expected MI under the random permutation model, summing hypergeometric
/// weights over every cluster pair. Cost grows with R*C; pass a deadline to
/// bound it (throws TimeLimitExceeded when hit).
[[nodiscard]] double emi_exact(const Marginals& a, const Marginals& b, const Deadline& deadline = {});

struct Adjusted {
    double value = 0.0;
    bool degenerate = false;
};

/// (mi - emi) / (norm - emi) with the degenerate conventions:
/// both entropies zero -> 1.0; |norm - emi| < 1e-12 -> 0.0. Both flagged.
[[nodiscard]] Adjusted adjust_for_chance(double mi, double h_u, double h_v, double emi,
                                         Normalizer norm = Normalizer::ArithmeticMean);

/// AMI of two clusterings for a supplied EMI (exact or estimated).
[[nodiscard]] Adjusted ami(const Clustering& u, const Clustering& v, Normalizer norm, double emi);

/// AMI with the exact EMI.
[[nodiscard]] Adjusted exact_ami(const Clustering& u, const Clustering& v,
                                 Normalizer norm = Normalizer::ArithmeticMean, const Deadline& deadline = {});

/// Mean of I(u, sigma o v) over all N(N-1)/2 transpositions sigma.
///
/// A transposition of two points changes the table only when the points
/// differ in both row and column; the change then touches four cells. The
/// sum over all such point pairs splits into a per-cell term and a term over
/// every (row, col) position, and the latter is closed-form for empty
/// positions, so the total costs O(N + R + C) after building the table.
/// Throws std::invalid_argument when N < 2 or lengths differ.
[[nodiscard]] double pairwise_emi(const Clustering& u, const Clustering& v);

[[nodiscard]] Adjusted pairwise_ami(const Clustering& u, const Clustering& v,
                                    Normalizer norm = Normalizer::ArithmeticMean);

/// Mean normalized entropy H(u)/log R over the set; single-cluster members
/// contribute 0. Throws std::invalid_argument on an empty set.
[[nodiscard]] double balance(std::span<const Clustering> clusterings);

}  // namespace fastami
