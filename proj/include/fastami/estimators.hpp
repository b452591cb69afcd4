#pragma once

#include "fastami/core_metrics.hpp"
#include "fastami/rng.hpp"
#include "fastami/types.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

namespace fastami {

struct EstimatorConfig {
    /// Target precision p: relative above an estimate of 1, absolute below.
    double precision = 0.01;
    /// Samples drawn before the stopping rule is consulted (>= 2).
    std::uint64_t min_samples = 10'000;
    /// Hard cap; reaching it returns a non-converged estimate.
    std::uint64_t max_samples = 1'000'000'000;
    Seed seed{};
    /// Optional wall-clock limit in seconds; hitting it sets timed_out.
    std::optional<double> time_limit_s;

    /// Throws std::invalid_argument if precision <= 0 or min_samples < 2.
    void validate() const;
};

/// Result of a Monte Carlo estimate.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    bool converged = false;
    bool degenerate = false;
    bool timed_out = false;
};

/// Single-pass mean and sum of squared deviations (Welford), mergeable with
/// Chan's pairwise update.
class RunningMoments {
public:
    void push(double x) noexcept {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    void merge(const RunningMoments& other) noexcept;

    [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double m2() const noexcept { return m2_; }
    /// Unbiased sample variance; 0 below two samples.
    [[nodiscard]] double variance() const noexcept {
        return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    }
    /// Standard error of the mean, sqrt(M2 / (i (i - 1))).
    [[nodiscard]] double std_error() const noexcept {
        return count_ > 1 ? std::sqrt(m2_ / (static_cast<double>(count_) * static_cast<double>(count_ - 1))) : 0.0;
    }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// The stopping rule is checked once per this many samples after min_samples.
inline constexpr std::uint64_t kConvergenceCheckInterval = 256;

/// Monte Carlo estimate of the expected mutual information (nats).
///
/// Cluster sizes a, b are drawn from the size frequencies of A and B through
/// alias tables; the overlap enters through m ~ Hyp(a - 1, b - 1, N - 1),
/// which absorbs the factor n of the information term. Each sample is
///     x = (R C / N^2) a b log((m + 1) N / (a b))
/// whose mean is E{I | A, B}. Sampling stops once at least min_samples are
/// drawn and the standard error is <= p * max(1, mean).
/// Throws std::invalid_argument for mismatched totals, N < 2 or a bad config.
[[nodiscard]] Estimate fast_emi(const Marginals& a, const Marginals& b, const EstimatorConfig& cfg);

/// Parallel variant: `streams` independently seeded sample streams run in
/// rounds, and their moments are merged in stream order after each round, so
/// the result is deterministic for a given (seed, streams).
[[nodiscard]] Estimate fast_emi_parallel(const Marginals& a, const Marginals& b, const EstimatorConfig& cfg,
                                         unsigned streams);

/// AMI with an estimated EMI. MI and entropies are exact; the standard error
/// is the EMI error propagated to first order,
/// |I - norm| / (norm - EMI)^2 * s_EMI.
[[nodiscard]] Estimate fast_ami(const Clustering& u, const Clustering& v, const EstimatorConfig& cfg,
                                Normalizer norm = Normalizer::ArithmeticMean);

/// AMI from an already computed EMI estimate; fast_ami is this applied to
/// fast_emi of the clusterings' marginals.
[[nodiscard]] Estimate ami_from_emi(double mi, double h_u, double h_v, const Estimate& emi, Normalizer norm);

/// SMI = (I - E) / sqrt(V) where E and V are the sample mean and variance of
/// I over random tables with the clusterings' margins. Stops when the
/// standard error sqrt(1/i + SMI^2 / (2 (i - 1))) is <= p * max(1, |SMI|).
/// If every sampled table has the same I the result is flagged degenerate
/// and its value is NaN.
[[nodiscard]] Estimate fast_smi_direct(const Clustering& u, const Clustering& v, const EstimatorConfig& cfg);

/// Standard error of the SMI estimate after `samples` draws.
[[nodiscard]] double smi_std_error(double smi, std::uint64_t samples) noexcept;

}  // namespace fastami
