#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace ssp {

using Rng = std::mt19937_64;

// splitmix64 finalizer; derives independent sub-seeds for stages, retries and restarts.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(seed, a), b);
}

// Fixed-size word bitset with the handful of bulk operations the counting code needs.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const { return bits_; }
    std::size_t num_words() const { return words_.size(); }

    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

    void set_all() {
        std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
        trim();
    }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    const std::uint64_t* data() const { return words_.data(); }
    std::uint64_t* data() { return words_.data(); }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }
    Bitset& and_not(const Bitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
        return *this;
    }

    // Calls f(i) for every set bit in increasing order.
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w != 0) {
                int b = std::countr_zero(w);
                f(k * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

private:
    void trim() {
        if (bits_ % 64 != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << (bits_ % 64)) - 1;
        }
    }

    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

inline std::size_t popcount_and(const Bitset& a, const Bitset& b) {
    std::size_t c = 0;
    const auto* x = a.data();
    const auto* y = b.data();
    for (std::size_t k = 0; k < a.num_words(); ++k) c += static_cast<std::size_t>(std::popcount(x[k] & y[k]));
    return c;
}

inline std::size_t popcount_and(const Bitset& a, const Bitset& b, const Bitset& c) {
    std::size_t s = 0;
    const auto* x = a.data();
    const auto* y = b.data();
    const auto* z = c.data();
    for (std::size_t k = 0; k < a.num_words(); ++k) s += static_cast<std::size_t>(std::popcount(x[k] & y[k] & z[k]));
    return s;
}

// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
// Each index is handled by exactly one thread; callers write to disjoint slots.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    std::size_t workers = std::min<std::size_t>(hw, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace ssp
