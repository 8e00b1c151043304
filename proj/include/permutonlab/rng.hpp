#pragma once

#include <cstdint>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

namespace permutonlab {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
} // namespace detail

/// Deterministic, platform-independent random stream identified by
/// (seed, stream).  The engine is std::mt19937_64, whose raw output
/// sequence is fully specified by the standard; all range reductions
/// below are done by masked rejection so no implementation-defined
/// distribution code is involved.
class SeededRng {
public:
    SeededRng(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream),
          engine_(detail::splitmix64(detail::splitmix64(seed) ^
                                     detail::splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t mask = ~0ULL >> __builtin_clzll((bound - 1) | 1);
        for (;;) {
            std::uint64_t v = next_u64() & mask;
            if (v < bound) return v;
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform big integer in [0, bound). bound >= 1.
    BigInt below_big(const BigInt& bound) {
        if (bound <= 1) return BigInt(0);
        BigInt top = bound - 1;
        unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(top)) + 1;
        unsigned words = (bits + 63) / 64;
        std::uint64_t himask =
            (bits % 64 == 0) ? ~0ULL : ((1ULL << (bits % 64)) - 1);
        for (;;) {
            BigInt v = 0;
            for (unsigned w = 0; w < words; ++w) {
                std::uint64_t x = next_u64();
                if (w == words - 1) x &= himask;
                v |= BigInt(x) << (64 * w);
            }
            if (v < bound) return v;
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

} // namespace permutonlab
