#pragma once
#include <cstdint>
#include <random>
#include <vector>

namespace tnsched {

using Rng = std::mt19937_64;

// Draw helpers with pinned bit-to-value mappings.  std::uniform_*_distribution
// is implementation-defined, which would make seeded fixtures differ between
// standard libraries; these stay stable anywhere mt19937_64 does.

// Uniform integer in [0, n) by rejection sampling.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline int uniform_int(Rng& rng, int lo, int hi) { // inclusive bounds
    return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// k distinct values from [0, n), order randomized (partial Fisher-Yates).
inline std::vector<int> sample_distinct(Rng& rng, int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

template <typename T>
inline void shuffle_inplace(Rng& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = uniform_below(rng, i);
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace tnsched
