#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ortho {

// Fixed-capacity bit set over dense element indices.
class Bitset {
  public:
    Bitset() = default;
    explicit Bitset(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int size() const { return n_; }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    int count() const {
        int c = 0;
        for (auto w : w_) c += __builtin_popcountll(w);
        return c;
    }

    bool operator==(const Bitset& o) const = default;

  private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

using Rng = std::mt19937_64;

// Uniform draw in [0, n); avoids std::uniform_int_distribution so that
// sequences are identical across standard library implementations.
inline std::uint64_t rng_below(Rng& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    // rejection sampling on the top range to remove modulo bias
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline double rng_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Derive an independent stream from a base seed (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// k-subset sampled without replacement, returned sorted.
inline std::vector<int> sample_subset(Rng& rng, int universe, int k) {
    std::vector<int> pool(universe);
    for (int i = 0; i < universe; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng_below(rng, universe - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

inline std::uint64_t fnv1a(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace ortho
