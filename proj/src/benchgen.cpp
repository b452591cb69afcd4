#include "fastami/benchgen.hpp"

#include "fastami/core_metrics.hpp"
#include "fastami/estimators.hpp"
#include "fastami/math.hpp"
#include "fastami/samplers.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace fastami {

namespace {

// Largest |term| for which the alternating sum is evaluated directly.
constexpr double kMaxDirectTermLog = 20.0 * 0.6931471805599453;  // log(2^20)

double empty_cluster_by_occupancy(Count N, Count C) {
    // prob[k]: k distinct clusters hit after t points.
    std::vector<double> prob(static_cast<std::size_t>(C) + 1, 0.0);
    prob[0] = 1.0;
    const double dc = static_cast<double>(C);
    for (Count t = 1; t <= N; ++t) {
        const Count top = std::min(t, C);
        for (Count k = top; k >= 1; --k) {
            const auto ku = static_cast<std::size_t>(k);
            prob[ku] = prob[ku] * static_cast<double>(k) / dc + prob[ku - 1] * static_cast<double>(C - k + 1) / dc;
        }
        prob[0] = 0.0;
    }
    return std::clamp(1.0 - prob[static_cast<std::size_t>(C)], 0.0, 1.0);
}

}  // namespace

double empty_cluster_probability(Count N, Count C) {
    if (N < 1 || C < 1) {
        throw std::invalid_argument("empty_cluster_probability: need N >= 1 and C >= 1");
    }
    if (C == 1) {
        return 0.0;
    }
    if (N < C) {
        return 1.0;
    }
    const double dn = static_cast<double>(N);
    const double dc = static_cast<double>(C);
    std::vector<double> log_terms;
    log_terms.reserve(static_cast<std::size_t>(C));
    double largest = -std::numeric_limits<double>::infinity();
    for (Count i = 1; i < C; ++i) {
        const double lt = log_factorial(C) - log_factorial(i) - log_factorial(C - i) +
                          dn * std::log1p(-static_cast<double>(i) / dc);
        log_terms.push_back(lt);
        largest = std::max(largest, lt);
    }
    if (largest > kMaxDirectTermLog) {
        return empty_cluster_by_occupancy(N, C);
    }
    // Neumaier-compensated alternating sum in extended precision.
    long double sum = 0.0L;
    long double carry = 0.0L;
    for (std::size_t k = 0; k < log_terms.size(); ++k) {
        const long double term = (k % 2 == 0 ? 1.0L : -1.0L) * std::exp(static_cast<long double>(log_terms[k]));
        const long double t = sum + term;
        if (std::fabs(sum) >= std::fabs(term)) {
            carry += (sum - t) + term;
        } else {
            carry += (term - t) + sum;
        }
        sum = t;
    }
    return std::clamp(static_cast<double>(sum + carry), 0.0, 1.0);
}

Marginals random_marginals(Count N, Count parts, Rng& rng) { return uniform_partition(N, parts, rng); }

Clustering clustering_from_marginals(const Marginals& m, Rng& rng) {
    std::vector<Clustering::Label> labels;
    labels.reserve(static_cast<std::size_t>(m.n_points()));
    for (std::size_t k = 0; k < m.n_clusters(); ++k) {
        labels.insert(labels.end(), static_cast<std::size_t>(m[k]), static_cast<Clustering::Label>(k));
    }
    shuffle(std::span<Clustering::Label>(labels), rng);
    return Clustering(std::move(labels));
}

Clustering block_clustering(const Marginals& m) {
    const Marginals sorted = m.canonical();
    std::vector<Clustering::Label> labels;
    labels.reserve(static_cast<std::size_t>(m.n_points()));
    for (std::size_t k = 0; k < sorted.n_clusters(); ++k) {
        labels.insert(labels.end(), static_cast<std::size_t>(sorted[k]), static_cast<Clustering::Label>(k));
    }
    return Clustering(std::move(labels));
}

std::string_view to_string(BenchMethod m) noexcept {
    switch (m) {
        case BenchMethod::Exact: return "exact";
        case BenchMethod::Pairwise: return "pairwise";
        case BenchMethod::Fast: return "fast";
    }
    return "exact";
}

BenchMethod parse_bench_method(std::string_view name) {
    if (name == "exact") return BenchMethod::Exact;
    if (name == "pairwise") return BenchMethod::Pairwise;
    if (name == "fast") return BenchMethod::Fast;
    throw std::invalid_argument("unknown benchmark method: " + std::string(name));
}

std::uint64_t peak_memory_bytes() {
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0) {
        return 0;
    }
    return static_cast<std::uint64_t>(usage.ru_maxrss) * 1024;  // Linux reports KiB
}

std::vector<BenchRow> run_synthetic_benchmark(const BenchSpec& spec) {
    std::vector<BenchMethod> methods = spec.methods;
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

    std::vector<BenchRow> rows;
    if (methods.empty()) {
        return rows;
    }
    for (Count n : spec.n_values) {
        for (Count r : spec.r_values) {
            if (r < 1 || r > n) {
                continue;
            }
            for (std::size_t k = 0; k < spec.pairs; ++k) {
                const Seed pair_seed =
                    derive_seed(derive_seed(derive_seed(spec.seed, static_cast<std::uint64_t>(n)),
                                            static_cast<std::uint64_t>(r)),
                                k);
                Rng rng(pair_seed);
                const Marginals a = random_marginals(n, r, rng);
                const Marginals b = random_marginals(n, r, rng);

                for (BenchMethod method : methods) {
                    BenchRow row;
                    row.method = method;
                    row.n = n;
                    row.r = r;
                    row.c = r;
                    row.seed = pair_seed.value;
                    row.value = std::numeric_limits<double>::quiet_NaN();
                    const auto start = std::chrono::steady_clock::now();
                    try {
                        switch (method) {
                            case BenchMethod::Exact:
                                row.value = emi_exact(a, b, deadline_after(spec.timeout_s));
                                break;
                            case BenchMethod::Pairwise:
                                row.value = pairwise_emi(block_clustering(a), block_clustering(b));
                                break;
                            case BenchMethod::Fast: {
                                EstimatorConfig cfg;
                                cfg.precision = spec.precision;
                                cfg.min_samples = spec.min_samples;
                                cfg.seed = derive_seed(pair_seed, 0xfa57);
                                cfg.time_limit_s = spec.timeout_s;
                                const Estimate e = fast_emi(a, b, cfg);
                                row.value = e.value;
                                row.std_error = e.std_error;
                                row.n_samples = e.n_samples;
                                if (e.timed_out) {
                                    row.status = "timeout";
                                } else if (!e.converged) {
                                    row.status = "not_converged";
                                }
                                break;
                            }
                        }
                    } catch (const TimeLimitExceeded&) {
                        row.status = "timeout";
                    } catch (const std::exception&) {
                        row.status = "error";
                    }
                    const double elapsed =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                    if (method == BenchMethod::Pairwise && elapsed > spec.timeout_s && row.status == "ok") {
                        row.status = "timeout";
                    }
                    if (spec.record_timing) {
                        row.wall_time_s = elapsed;
                        row.peak_mem_bytes = peak_memory_bytes();
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

namespace {

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return "";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "# fastami-bench schema v" << kBenchCsvSchemaVersion << "\n";
    out << "method,n,r,c,value,std_error,n_samples,wall_time_s,peak_mem_bytes,seed,status\n";
    for (const BenchRow& row : rows) {
        out << to_string(row.method) << ',' << row.n << ',' << row.r << ',' << row.c << ','
            << format_double(row.value) << ',' << (row.std_error ? format_double(*row.std_error) : "") << ','
            << (row.n_samples ? std::to_string(*row.n_samples) : "") << ','
            << (row.wall_time_s ? format_double(*row.wall_time_s) : "") << ','
            << (row.peak_mem_bytes ? std::to_string(*row.peak_mem_bytes) : "") << ',' << row.seed << ','
            << row.status << '\n';
    }
}

}  // namespace fastami
