#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace fastami {

/// log(k!) for k >= 0. Tabulated below 256, Stirling series (four
/// correction terms, error < 1e-22 relative) above.
double log_factorial(std::int64_t k) noexcept;

/// log of the hypergeometric PMF: probability that a random draw of `b` out
/// of N points contains exactly n of a fixed set of `a` points.
double log_hypergeometric_pmf(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t N) noexcept;

/// Optional wall-clock limit for long-running computations.
using Deadline = std::optional<std::chrono::steady_clock::time_point>;

[[nodiscard]] inline Deadline deadline_after(double seconds) {
    return std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds));
}

[[nodiscard]] inline bool expired(const Deadline& d) {
    return d && std::chrono::steady_clock::now() >= *d;
}

class TimeLimitExceeded : public std::runtime_error {
public:
    TimeLimitExceeded() : std::runtime_error("time limit exceeded") {}
};

}  // namespace fastami
