#pragma once

// Growable bitset used for the relation matrices of the unfolder.  Rows are
// appended as nodes are created, so operations tolerate operands of different
// lengths (missing high words read as zero).

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pntar {

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t nbits) : words_((nbits + 63) / 64, 0) {}

    void set(std::size_t i) {
        if (word_index(i) >= words_.size()) words_.resize(word_index(i) + 1, 0);
        words_[word_index(i)] |= bit_mask(i);
    }

    void reset(std::size_t i) {
        if (word_index(i) < words_.size()) words_[word_index(i)] &= ~bit_mask(i);
    }

    bool test(std::size_t i) const {
        return word_index(i) < words_.size() && (words_[word_index(i)] & bit_mask(i));
    }

    bool any() const {
        for (uint64_t w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t n = 0;
        for (uint64_t w : words_) n += static_cast<std::size_t>(popcount(w));
        return n;
    }

    Bitset& operator|=(const Bitset& o) {
        if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
        for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    Bitset& operator&=(const Bitset& o) {
        if (words_.size() > o.words_.size()) words_.resize(o.words_.size());
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    // this &= ~o
    Bitset& and_not(const Bitset& o) {
        const std::size_t n = words_.size() < o.words_.size() ? words_.size() : o.words_.size();
        for (std::size_t i = 0; i < n; ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    bool intersects(const Bitset& o) const {
        const std::size_t n = words_.size() < o.words_.size() ? words_.size() : o.words_.size();
        for (std::size_t i = 0; i < n; ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            uint64_t ow = i < o.words_.size() ? o.words_[i] : 0;
            if (words_[i] & ~ow) return false;
        }
        return true;
    }

    bool operator==(const Bitset& o) const {
        const std::size_t n = words_.size() > o.words_.size() ? words_.size() : o.words_.size();
        for (std::size_t i = 0; i < n; ++i) {
            uint64_t a = i < words_.size() ? words_[i] : 0;
            uint64_t b = i < o.words_.size() ? o.words_[i] : 0;
            if (a != b) return false;
        }
        return true;
    }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    // Calls f(index) for every set bit, in increasing order.
    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            uint64_t w = words_[wi];
            while (w) {
                unsigned b = trailing_zeros(w);
                f(wi * 64 + b);
                w &= w - 1;
            }
        }
    }

private:
    static std::size_t word_index(std::size_t i) { return i / 64; }
    static uint64_t bit_mask(std::size_t i) { return uint64_t{1} << (i % 64); }
    static int popcount(uint64_t w) { return __builtin_popcountll(w); }
    static unsigned trailing_zeros(uint64_t w) { return static_cast<unsigned>(__builtin_ctzll(w)); }

    std::vector<uint64_t> words_;
};

} // namespace pntar
