#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "kelleyscope/errors.hpp"
#include "kelleyscope/rational.hpp"

namespace kelleyscope {

// The library's one seeded stream: SplitMix64 (Steele/Lea/Flood constants).
// Every generator derives its randomness from this via the documented
// procedures below, so instances are bit-identical across runs and
// platforms. The stream identity is pinned by a golden test.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection (unbiased).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw value_error("rng: below(0)");
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform in [0, n) for arbitrary-precision n: draw ceil(bits/64) words,
    // mask to the bit width of n-1, reject values >= n.
    Integer below_big(const Integer& n) {
        if (n <= 0) throw value_error("rng: below_big needs n >= 1");
        if (n == 1) return Integer(0);
        const unsigned bits = boost::multiprecision::msb(n - 1) + 1;
        const unsigned words = (bits + 63) / 64;
        for (;;) {
            Integer z(0);
            for (unsigned w = 0; w < words; ++w) z = (z << 64) | Integer(next());
            z >>= words * 64 - bits;
            if (z < n) return z;
        }
    }

    // Exact Bernoulli(p) for rational p in [0,1].
    bool bernoulli(const Rational& p) {
        if (p < 0 || p > 1) throw value_error("rng: bernoulli probability out of [0,1]");
        if (p == 0) return false;
        if (p == 1) return true;
        return below_big(den(p)) < num(p);
    }

    // Uniform k-subset of [0,n) via a partial Fisher-Yates shuffle,
    // returned sorted.
    std::vector<std::size_t> choose(std::size_t n, std::size_t k) {
        if (k > n) throw value_error("rng: choose(k > n)");
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        std::sort(idx.begin(), idx.end());
        return idx;
    }

    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(idx[i], idx[j]);
        }
        return idx;
    }

private:
    std::uint64_t state_;
};

} // namespace kelleyscope
