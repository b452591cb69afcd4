#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <limits>

namespace fastami {

/// 64-bit seed for every sampling stream.
struct Seed {
    std::uint64_t value = 0;
};

/// SplitMix64 step (Steele, Lea, Flood 2014). Used to expand seeds and to
/// derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Mixes a parent seed with a stream index into a new seed.
constexpr Seed derive_seed(Seed parent, std::uint64_t stream) noexcept {
    std::uint64_t s = parent.value ^ (stream * 0xd1b54a32d192ed03ULL);
    splitmix64(s);
    return Seed{splitmix64(s)};
}

/// xoshiro256** 1.0 (Blackman & Vigna), state seeded by four SplitMix64
/// outputs of the seed value. Satisfies UniformRandomBitGenerator.
///
/// The variate helpers below are part of the reproducibility contract:
///   uniform()      = (next() >> 11) * 2^-53, in [0, 1)
///   bounded(n)     = Lemire's multiply-shift with rejection, in [0, n)
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(Seed seed = {}) noexcept {
        std::uint64_t sm = seed.value;
        for (auto& word : s_) {
            word = splitmix64(sm);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next(); }

    result_type next() noexcept {
        const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos() noexcept { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t bounded(std::uint64_t n) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace fastami
