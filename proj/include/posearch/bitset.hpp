#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace posearch {

// Fixed-width bit vector. Backs both the order relation rows of a poset
// (bit i = element i, index 0 unused) and the binary codes over
// join-irreducible enumerations (bit i = i-th join-irreducible).
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int width) : width_(width), words_((width + 63) / 64, 0) {}

    int width() const { return width_; }

    bool test(int i) const {
        assert(i >= 0 && i < width_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(int i) {
        assert(i >= 0 && i < width_);
        words_[i >> 6] |= std::uint64_t(1) << (i & 63);
    }
    void reset(int i) {
        assert(i >= 0 && i < width_);
        words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }
    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bitset& operator&=(const Bitset& o) {
        assert(width_ == o.width_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        assert(width_ == o.width_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    // this &= ~o
    Bitset& andnot(const Bitset& o) {
        assert(width_ == o.width_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    bool subset_of(const Bitset& o) const {
        assert(width_ == o.width_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    bool intersects(const Bitset& o) const {
        assert(width_ == o.width_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    bool operator==(const Bitset&) const = default;

    // First set bit at position >= from, or -1.
    int find_next(int from) const {
        if (from >= width_) return -1;
        int wi = from >> 6;
        std::uint64_t w = words_[wi] & (~std::uint64_t(0) << (from & 63));
        while (true) {
            if (w) return (wi << 6) + std::countr_zero(w);
            if (++wi >= static_cast<int>(words_.size())) return -1;
            w = words_[wi];
        }
    }
    int find_first() const { return find_next(0); }

    template <class F>
    void for_each(F f) const {
        for (int i = find_first(); i >= 0; i = find_next(i + 1)) f(i);
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    // k-th set bit (0-based), or -1 when fewer than k+1 bits are set.
    int nth_set(int k) const {
        for (int i = find_first(); i >= 0; i = find_next(i + 1))
            if (k-- == 0) return i;
        return -1;
    }

    // Bits rendered in position order: bit 0 first.
    std::string to_string() const {
        std::string s(width_, '0');
        for_each([&](int i) { s[i] = '1'; });
        return s;
    }

private:
    int width_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace posearch
