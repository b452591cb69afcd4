#pragma once

#include "fastami/rng.hpp"
#include "fastami/types.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fastami {

/// P(at least one of C clusters is empty) when N points are assigned to C
/// clusters independently and uniformly, by inclusion-exclusion.
[[nodiscard]] double empty_cluster_probability(Count N, Count C);

/// Uniformly random cluster sizes: N points in exactly `parts` clusters.
[[nodiscard]] Marginals random_marginals(Count N, Count parts, Rng& rng);

/// Labels laid out cluster by cluster from m, then shuffled.
[[nodiscard]] Clustering clustering_from_marginals(const Marginals& m, Rng& rng);

/// Labels laid out cluster by cluster from m, largest cluster first, no
/// shuffle. Two block clusterings of the same N overlap as much as their
/// sizes allow.
[[nodiscard]] Clustering block_clustering(const Marginals& m);

enum class BenchMethod { Exact, Pairwise, Fast };

[[nodiscard]] std::string_view to_string(BenchMethod m) noexcept;
[[nodiscard]] BenchMethod parse_bench_method(std::string_view name);

struct BenchSpec {
    std::vector<Count> n_values;
    /// Cluster counts, used for both R and C. Grid points with R > N are skipped.
    std::vector<Count> r_values;
    std::size_t pairs = 20;
    std::vector<BenchMethod> methods;
    double precision = 0.01;
    std::uint64_t min_samples = 10'000;
    Seed seed{};
    double timeout_s = 60.0;
    /// When false, wall time and peak memory are left blank so that output is
    /// reproducible byte for byte.
    bool record_timing = true;
};

struct BenchRow {
    BenchMethod method = BenchMethod::Exact;
    Count n = 0;
    Count r = 0;
    Count c = 0;
    /// EMI in nats.
    double value = 0.0;
    std::optional<double> std_error;
    std::optional<std::uint64_t> n_samples;
    std::optional<double> wall_time_s;
    std::optional<std::uint64_t> peak_mem_bytes;
    /// Seed of the marginal pair (and of the estimator for method fast).
    std::uint64_t seed = 0;
    /// "ok", "timeout", "not_converged" or "error".
    std::string status = "ok";
};

/// Runs every requested method on `pairs` random marginal pairs per grid
/// point. The pairwise method needs clusterings, not just marginals; it is
/// run on the block clusterings of the pair. Rows come out ordered by (N, R, pair, method). Pair k of a grid
/// point uses derive_seed(seed, hash(N, R, k)), so rows are independent of
/// grid order and of which methods were requested.
[[nodiscard]] std::vector<BenchRow> run_synthetic_benchmark(const BenchSpec& spec);

inline constexpr std::string_view kBenchCsvSchemaVersion = "1";

/// Writes "# fastami-bench schema v1" then the header row and data rows;
/// LF line endings, '.' decimal separator.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Process peak resident set size in bytes; 0 if unavailable.
[[nodiscard]] std::uint64_t peak_memory_bytes();

}  // namespace fastami
