#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace influence {

inline constexpr int kMaxVertices = 128;

/// Fixed 128-bit vertex set. Bit i is vertex i.
struct VertexSet {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    static VertexSet single(int v) {
        VertexSet s;
        s.set(v);
        return s;
    }
    static VertexSet first_n(int n) {
        VertexSet s;
        if (n >= 64) {
            s.lo = ~std::uint64_t{0};
            s.hi = n >= 128 ? ~std::uint64_t{0} : (std::uint64_t{1} << (n - 64)) - 1;
        } else if (n > 0) {
            s.lo = (std::uint64_t{1} << n) - 1;
        }
        return s;
    }

    bool test(int v) const { return v < 64 ? (lo >> v) & 1 : (hi >> (v - 64)) & 1; }
    void set(int v) {
        if (v < 64)
            lo |= std::uint64_t{1} << v;
        else
            hi |= std::uint64_t{1} << (v - 64);
    }
    void reset(int v) {
        if (v < 64)
            lo &= ~(std::uint64_t{1} << v);
        else
            hi &= ~(std::uint64_t{1} << (v - 64));
    }
    bool empty() const { return (lo | hi) == 0; }
    bool any() const { return !empty(); }
    int count() const { return std::popcount(lo) + std::popcount(hi); }
    /// Lowest member, or -1.
    int first() const {
        if (lo) return std::countr_zero(lo);
        if (hi) return 64 + std::countr_zero(hi);
        return -1;
    }
    int pop_first() {
        int v = first();
        if (v >= 0) reset(v);
        return v;
    }
    bool subset_of(const VertexSet& o) const { return (lo & ~o.lo) == 0 && (hi & ~o.hi) == 0; }
    bool intersects(const VertexSet& o) const { return (lo & o.lo) != 0 || (hi & o.hi) != 0; }

    VertexSet operator&(const VertexSet& o) const { return {lo & o.lo, hi & o.hi}; }
    VertexSet operator|(const VertexSet& o) const { return {lo | o.lo, hi | o.hi}; }
    VertexSet operator-(const VertexSet& o) const { return {lo & ~o.lo, hi & ~o.hi}; }
    VertexSet& operator&=(const VertexSet& o) { lo &= o.lo; hi &= o.hi; return *this; }
    VertexSet& operator|=(const VertexSet& o) { lo |= o.lo; hi |= o.hi; return *this; }
    VertexSet& operator-=(const VertexSet& o) { lo &= ~o.lo; hi &= ~o.hi; return *this; }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;
    friend auto operator<=>(const VertexSet&, const VertexSet&) = default;

    template <class F>
    void for_each(F&& f) const {
        for (std::uint64_t w = lo; w; w &= w - 1) f(std::countr_zero(w));
        for (std::uint64_t w = hi; w; w &= w - 1) f(64 + std::countr_zero(w));
    }
};

inline std::size_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return static_cast<std::size_t>(x);
}

struct VertexSetHash {
    std::size_t operator()(const VertexSet& s) const { return mix64(s.lo ^ mix64(s.hi + 0x9e3779b97f4a7c15ULL)); }
};

} // namespace influence
