#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace prefteam {

// ============================================================================
// Errors
// ============================================================================

/// Base class for all prefteam errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Variable/domain problems: unknown variables, mismatched or oversized
/// domains, malformed teams.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Formula or file text that does not conform to the grammar. Carries the
/// byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// ============================================================================
// Bitset — fixed-capacity dynamic bitset over 64-bit blocks
// ============================================================================

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t nbits)
        : nbits_(nbits), blocks_((nbits + 63) / 64, 0) {}

    static Bitset full(std::size_t nbits) {
        Bitset b(nbits);
        for (auto& w : b.blocks_) w = ~std::uint64_t{0};
        b.trim();
        return b;
    }

    std::size_t size() const { return nbits_; }

    bool test(std::size_t i) const {
        return (blocks_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i) { blocks_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { blocks_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : blocks_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }
    bool any() const {
        for (auto w : blocks_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bitset& operator&=(const Bitset& o) {
        check_same(o);
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] &= o.blocks_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        check_same(o);
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] |= o.blocks_[i];
        return *this;
    }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }

    bool operator==(const Bitset& o) const {
        return nbits_ == o.nbits_ && blocks_ == o.blocks_;
    }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    bool is_subset_of(const Bitset& o) const {
        check_same(o);
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i] & ~o.blocks_[i]) return false;
        return true;
    }

    bool intersects(const Bitset& o) const {
        check_same(o);
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i] & o.blocks_[i]) return true;
        return false;
    }

    /// Visits set bits in ascending index order.
    template <class Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
            std::uint64_t w = blocks_[bi];
            while (w) {
                int bit = __builtin_ctzll(w);
                fn(bi * 64 + static_cast<std::size_t>(bit));
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> to_indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each_set([&](std::size_t i) { out.push_back(i); });
        return out;
    }

private:
    void trim() {
        if (nbits_ % 64 != 0 && !blocks_.empty())
            blocks_.back() &= (std::uint64_t{1} << (nbits_ % 64)) - 1;
    }
    void check_same(const Bitset& o) const {
        if (nbits_ != o.nbits_)
            throw DomainError("bitset size mismatch");
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> blocks_;
};

// ============================================================================
// SplitMix64 — deterministic, splittable PRNG
// ============================================================================
//
// Fixed algorithm so that seeded runs are byte-identical across platforms
// (std:: distributions are implementation-defined, so we avoid them).

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform draw from [0, bound), bound >= 1. Unbiased via rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("SplitMix64::below: bound must be positive");
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    /// Derives an independent stream.
    SplitMix64 split() { return SplitMix64(next() ^ 0x6A09E667F3BCC909ull); }

private:
    std::uint64_t state_;
};

}  // namespace prefteam
