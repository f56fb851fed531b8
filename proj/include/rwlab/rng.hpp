// rng.hpp — counter-based random number generator.
//
// Every consumer owns a stream keyed by (master_seed, stream_id). Draws are
// pure functions of (key, counter), so trajectory i produces the same values
// no matter which thread runs it or in what order streams are consumed.
#pragma once

#include <cstdint>

namespace rwlab {

namespace detail {

// SplitMix64 finalizer. Passes the usual statistical batteries when driven
// by a counter, which is exactly how we drive it.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

class CounterRng {
public:
    CounterRng(uint64_t master_seed, uint64_t stream_id)
        : key_(detail::mix64(detail::mix64(master_seed) ^ stream_id)), counter_(0) {}

    uint64_t next_u64() {
        return detail::mix64(key_ ^ 0x6a09e667f3bcc909ULL ^ counter_++ * 0x9e3779b97f4a7c15ULL);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n), unbiased (Lemire rejection).
    uint64_t below(uint64_t n) {
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<uint64_t>(m);
        if (lo < n) {
            uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    uint64_t key() const { return key_; }
    uint64_t counter() const { return counter_; }

private:
    uint64_t key_;
    uint64_t counter_;
};

// Fisher-Yates shuffle driven by a CounterRng.
template <class Vec>
void shuffle(Vec& v, CounterRng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.below(i));
        auto tmp = v[i - 1];
        v[i - 1] = v[j];
        v[j] = tmp;
    }
}

} // namespace rwlab
