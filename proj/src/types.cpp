#include "fastami/types.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace fastami {

Marginals::Marginals(std::vector<Count> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) {
        throw std::invalid_argument("marginals: no clusters");
    }
    for (Count s : sizes_) {
        if (s < 1) {
            throw std::invalid_argument("marginals: cluster sizes must be >= 1");
        }
        n_points_ += s;
    }
}

Marginals Marginals::canonical() const {
    Marginals m = *this;
    std::sort(m.sizes_.begin(), m.sizes_.end(), std::greater<>());
    return m;
}

Clustering::Clustering(std::vector<Label> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
        throw std::invalid_argument("clustering: no points");
    }
    const Label max_label = *std::max_element(labels_.begin(), labels_.end());
    std::vector<bool> seen(static_cast<std::size_t>(max_label) + 1, false);
    for (Label l : labels_) {
        seen[l] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw std::invalid_argument("clustering: labels are not dense (empty cluster)");
    }
    n_clusters_ = seen.size();
}

namespace {

template <class T>
Clustering densify(std::span<const T> raw) {
    std::unordered_map<T, Clustering::Label> ids;
    ids.reserve(raw.size());
    std::vector<Clustering::Label> labels;
    labels.reserve(raw.size());
    for (const T& token : raw) {
        auto [it, inserted] = ids.try_emplace(token, static_cast<Clustering::Label>(ids.size()));
        labels.push_back(it->second);
    }
    return Clustering(std::move(labels));
}

}  // namespace

Clustering Clustering::from_raw(std::span<const std::int64_t> raw) { return densify(raw); }

Clustering Clustering::from_tokens(std::span<const std::string> tokens) { return densify(tokens); }

Marginals Clustering::marginals() const {
    std::vector<Count> sizes(n_clusters_, 0);
    for (Label l : labels_) {
        ++sizes[l];
    }
    return Marginals(std::move(sizes));
}

SparseContingency::SparseContingency(std::vector<Cell> cells, Marginals rows, Marginals cols)
    : cells_(std::move(cells)), rows_(std::move(rows)), cols_(std::move(cols)) {
    if (rows_.n_points() != cols_.n_points()) {
        throw std::invalid_argument("contingency: marginal totals differ");
    }
    std::vector<Count> row_sum(rows_.n_clusters(), 0);
    std::vector<Count> col_sum(cols_.n_clusters(), 0);
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        const Cell& c = cells_[k];
        if (c.count < 1) {
            throw std::invalid_argument("contingency: stored cells must be positive");
        }
        if (c.row >= rows_.n_clusters() || c.col >= cols_.n_clusters()) {
            throw std::invalid_argument("contingency: cell index out of range");
        }
        if (k > 0) {
            const Cell& p = cells_[k - 1];
            if (std::tie(p.row, p.col) >= std::tie(c.row, c.col)) {
                throw std::invalid_argument("contingency: cells must be strictly sorted");
            }
        }
        row_sum[c.row] += c.count;
        col_sum[c.col] += c.count;
    }
    if (!std::equal(row_sum.begin(), row_sum.end(), rows_.sizes().begin()) ||
        !std::equal(col_sum.begin(), col_sum.end(), cols_.sizes().begin())) {
        throw std::invalid_argument("contingency: cell sums do not match marginals");
    }
}

SparseContingency SparseContingency::from_trusted(std::vector<Cell> cells, Marginals rows, Marginals cols) {
    SparseContingency t;
    t.cells_ = std::move(cells);
    t.rows_ = std::move(rows);
    t.cols_ = std::move(cols);
    return t;
}

Count SparseContingency::at(std::uint32_t row, std::uint32_t col) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), Cell{row, col, 0}, [](const Cell& a, const Cell& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    if (it != cells_.end() && it->row == row && it->col == col) {
        return it->count;
    }
    return 0;
}

SparseContingency SparseContingency::transpose() const {
    std::vector<Cell> t;
    t.reserve(cells_.size());
    for (const Cell& c : cells_) {
        t.push_back({c.col, c.row, c.count});
    }
    std::sort(t.begin(), t.end(), [](const Cell& a, const Cell& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    return from_trusted(std::move(t), cols_, rows_);
}

std::string_view to_string(Normalizer n) noexcept {
    switch (n) {
        case Normalizer::ArithmeticMean: return "arithmetic";
        case Normalizer::GeometricMean: return "geometric";
        case Normalizer::Minimum: return "min";
        case Normalizer::Maximum: return "max";
    }
    return "arithmetic";
}

Normalizer parse_normalizer(std::string_view name) {
    if (name == "arithmetic" || name == "arithmetic-mean") return Normalizer::ArithmeticMean;
    if (name == "geometric" || name == "geometric-mean") return Normalizer::GeometricMean;
    if (name == "min" || name == "minimum") return Normalizer::Minimum;
    if (name == "max" || name == "maximum") return Normalizer::Maximum;
    throw std::invalid_argument("unknown normalizer: " + std::string(name));
}

}  // namespace fastami
