#include "fastami/math.hpp"

#include <array>
#include <cmath>

namespace fastami {

namespace {

constexpr int kTableSize = 256;

const std::array<double, kTableSize>& factorial_table() {
    static const std::array<double, kTableSize> table = [] {
        std::array<double, kTableSize> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (int k = 1; k < kTableSize; ++k) {
            acc += std::log(static_cast<long double>(k));
            t[k] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

}  // namespace

double log_factorial(std::int64_t k) noexcept {
    if (k < kTableSize) {
        return factorial_table()[static_cast<std::size_t>(k)];
    }
    constexpr double half_log_two_pi = 0.91893853320467274178;
    const double x = static_cast<double>(k);
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    return (x + 0.5) * std::log(x) - x + half_log_two_pi + series;
}

double log_hypergeometric_pmf(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t N) noexcept {
    return log_factorial(a) + log_factorial(b) + log_factorial(N - a) + log_factorial(N - b) - log_factorial(N) -
           log_factorial(n) - log_factorial(a - n) - log_factorial(b - n) - log_factorial(N - a - b + n);
}

}  // namespace fastami
