#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fastami {

/// Point and cluster-size counts.
using Count = std::int64_t;

/// Multiset of positive cluster sizes. Order is preserved as given; most
/// consumers only care about the multiset.
class Marginals {
public:
    Marginals() = default;

    /// Throws std::invalid_argument if empty or if any size is < 1.
    explicit Marginals(std::vector<Count> sizes);

    [[nodiscard]] std::span<const Count> sizes() const noexcept { return sizes_; }
    [[nodiscard]] Count n_points() const noexcept { return n_points_; }
    [[nodiscard]] std::size_t n_clusters() const noexcept { return sizes_.size(); }
    [[nodiscard]] Count operator[](std::size_t i) const { return sizes_[i]; }

    /// Copy with sizes sorted non-increasing.
    [[nodiscard]] Marginals canonical() const;

    friend bool operator==(const Marginals&, const Marginals&) = default;

private:
    std::vector<Count> sizes_;
    Count n_points_ = 0;
};

/// A surjective assignment of N points onto clusters 0..R-1.
class Clustering {
public:
    using Label = std::uint32_t;

    Clustering() = default;

    /// Validates that labels are dense: every index in 0..max occurs.
    /// Throws std::invalid_argument otherwise or if labels is empty.
    explicit Clustering(std::vector<Label> labels);

    /// Densifies arbitrary integer labels in first-appearance order.
    static Clustering from_raw(std::span<const std::int64_t> raw);

    /// Densifies opaque string tokens in first-appearance order.
    static Clustering from_tokens(std::span<const std::string> tokens);

    [[nodiscard]] std::span<const Label> labels() const noexcept { return labels_; }
    [[nodiscard]] Count n_points() const noexcept { return static_cast<Count>(labels_.size()); }
    [[nodiscard]] std::size_t n_clusters() const noexcept { return n_clusters_; }

    /// Cluster sizes indexed by label.
    [[nodiscard]] Marginals marginals() const;

    friend bool operator==(const Clustering& a, const Clustering& b) { return a.labels_ == b.labels_; }

private:
    std::vector<Label> labels_;
    std::size_t n_clusters_ = 0;
};

/// One nonzero cell of a contingency table.
struct Cell {
    std::uint32_t row;
    std::uint32_t col;
    Count count;

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Contingency table holding only nonzero cells, sorted by (row, col).
class SparseContingency {
public:
    /// Validates the cell list against both marginals: cells strictly sorted,
    /// counts positive, row and column sums matching.
    SparseContingency(std::vector<Cell> cells, Marginals rows, Marginals cols);

    [[nodiscard]] std::span<const Cell> cells() const noexcept { return cells_; }
    [[nodiscard]] const Marginals& row_marginals() const noexcept { return rows_; }
    [[nodiscard]] const Marginals& col_marginals() const noexcept { return cols_; }
    [[nodiscard]] Count n_points() const noexcept { return rows_.n_points(); }

    /// Count at (row, col); zero if the cell is not stored.
    [[nodiscard]] Count at(std::uint32_t row, std::uint32_t col) const;

    [[nodiscard]] SparseContingency transpose() const;

    /// Skips validation. Callers guarantee the invariants (samplers and
    /// label streaming produce sorted, margin-consistent cells).
    static SparseContingency from_trusted(std::vector<Cell> cells, Marginals rows, Marginals cols);

private:
    SparseContingency() = default;

    std::vector<Cell> cells_;
    Marginals rows_;
    Marginals cols_;
};

/// Upper bound on MI used to normalize the adjusted score.
enum class Normalizer { ArithmeticMean, GeometricMean, Minimum, Maximum };

[[nodiscard]] std::string_view to_string(Normalizer n) noexcept;

/// Accepts "arithmetic", "geometric", "min", "max" (and the long forms).
[[nodiscard]] Normalizer parse_normalizer(std::string_view name);

}  // namespace fastami
