#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace tanglekit {

/// Largest universe a Subset can address.
inline constexpr std::size_t kMaxUniverse = 64;

/// Subset of the universe {0, ..., n-1}, stored as a bit vector.
///
/// Ordering is by the numeric value of the bit pattern, which is the
/// "lexicographic bit order" used for every deterministic witness search.
class Subset {
public:
    constexpr Subset() = default;

    constexpr Subset(std::size_t n, std::uint64_t bits) : bits_{bits & window(n)}, n_{n} {
        if (n > kMaxUniverse) {
            throw std::length_error("subset universe larger than 64 elements");
        }
    }

    static constexpr Subset empty(std::size_t n) { return Subset{n, 0}; }
    static constexpr Subset full(std::size_t n) { return Subset{n, window(n)}; }

    static Subset singleton(std::size_t n, std::size_t i) {
        check_index(n, i);
        return Subset{n, std::uint64_t{1} << i};
    }

    static Subset of(std::size_t n, std::initializer_list<std::size_t> elements) {
        return of(n, std::vector<std::size_t>(elements));
    }

    static Subset of(std::size_t n, const std::vector<std::size_t>& elements) {
        std::uint64_t bits = 0;
        for (auto i : elements) {
            check_index(n, i);
            bits |= std::uint64_t{1} << i;
        }
        return Subset{n, bits};
    }

    [[nodiscard]] constexpr std::size_t universe_size() const { return n_; }
    [[nodiscard]] constexpr std::uint64_t bits() const { return bits_; }
    [[nodiscard]] constexpr std::size_t size() const {
        return static_cast<std::size_t>(std::popcount(bits_));
    }
    [[nodiscard]] constexpr bool is_empty() const { return bits_ == 0; }
    [[nodiscard]] constexpr bool is_full() const { return bits_ == window(n_); }
    /// True for X with X != {} and X != U.
    [[nodiscard]] constexpr bool is_proper() const { return !is_empty() && !is_full(); }

    [[nodiscard]] constexpr bool contains(std::size_t i) const {
        return i < n_ && ((bits_ >> i) & 1U) != 0;
    }

    [[nodiscard]] constexpr bool is_subset_of(Subset other) const {
        assert(n_ == other.n_);
        return (bits_ & ~other.bits_) == 0;
    }

    [[nodiscard]] constexpr bool intersects(Subset other) const {
        assert(n_ == other.n_);
        return (bits_ & other.bits_) != 0;
    }

    /// Complement within the n-bit window.
    [[nodiscard]] constexpr Subset complement() const { return Subset{n_, ~bits_}; }

    [[nodiscard]] Subset with(std::size_t i) const {
        check_index(n_, i);
        return Subset{n_, bits_ | (std::uint64_t{1} << i)};
    }

    [[nodiscard]] Subset without(std::size_t i) const {
        check_index(n_, i);
        return Subset{n_, bits_ & ~(std::uint64_t{1} << i)};
    }

    /// Smallest element; the subset must be nonempty.
    [[nodiscard]] constexpr std::size_t lowest() const {
        assert(bits_ != 0);
        return static_cast<std::size_t>(std::countr_zero(bits_));
    }

    [[nodiscard]] std::vector<std::size_t> elements() const {
        std::vector<std::size_t> out;
        out.reserve(size());
        for (auto rest = bits_; rest != 0; rest &= rest - 1) {
            out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
        }
        return out;
    }

    friend constexpr Subset operator&(Subset a, Subset b) {
        assert(a.n_ == b.n_);
        return Subset{a.n_, a.bits_ & b.bits_};
    }
    friend constexpr Subset operator|(Subset a, Subset b) {
        assert(a.n_ == b.n_);
        return Subset{a.n_, a.bits_ | b.bits_};
    }
    /// Set difference.
    friend constexpr Subset operator-(Subset a, Subset b) {
        assert(a.n_ == b.n_);
        return Subset{a.n_, a.bits_ & ~b.bits_};
    }

    friend constexpr bool operator==(Subset a, Subset b) = default;
    friend constexpr std::strong_ordering operator<=>(Subset a, Subset b) {
        if (auto c = a.n_ <=> b.n_; c != 0) {
            return c;
        }
        return a.bits_ <=> b.bits_;
    }

    static constexpr std::uint64_t window(std::size_t n) {
        return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    }

private:
    static void check_index(std::size_t n, std::size_t i) {
        if (i >= n) {
            throw std::out_of_range("element " + std::to_string(i) + " outside universe of size " +
                                    std::to_string(n));
        }
    }

    std::uint64_t bits_ = 0;
    std::size_t n_ = 0;
};

/// Number of subsets of an n-element universe, for exhaustive sweeps.
inline std::uint64_t subset_count(std::size_t n) {
    if (n >= 64) {
        throw std::length_error("cannot enumerate all subsets of a 64-element universe");
    }
    return std::uint64_t{1} << n;
}

/// Disjoint nonempty blocks covering the universe, kept sorted by least element.
struct Partition {
    std::vector<Subset> blocks;

    Partition() = default;
    explicit Partition(std::vector<Subset> b) : blocks{std::move(b)} { normalize(); }

    static Partition singletons(std::size_t n) {
        std::vector<Subset> b;
        for (std::size_t i = 0; i < n; ++i) {
            b.push_back(Subset::singleton(n, i));
        }
        return Partition{std::move(b)};
    }

    void normalize() {
        std::sort(blocks.begin(), blocks.end(), [](Subset a, Subset b) {
            if (a.is_empty() || b.is_empty()) {
                return a.is_empty() && !b.is_empty();
            }
            return a.lowest() < b.lowest();
        });
    }

    /// Block containing element i, or an empty set if none does.
    [[nodiscard]] Subset block_of(std::size_t i) const {
        for (auto b : blocks) {
            if (b.contains(i)) {
                return b;
            }
        }
        return blocks.empty() ? Subset{} : Subset::empty(blocks.front().universe_size());
    }

    /// Every block of *this lies inside some block of coarser.
    [[nodiscard]] bool refines(const Partition& coarser) const {
        return std::all_of(blocks.begin(), blocks.end(), [&](Subset b) {
            return std::any_of(coarser.blocks.begin(), coarser.blocks.end(),
                               [&](Subset c) { return b.is_subset_of(c); });
        });
    }

    /// Disjoint, nonempty, and covering an n-element universe.
    [[nodiscard]] bool is_valid(std::size_t n) const {
        std::uint64_t seen = 0;
        for (auto b : blocks) {
            if (b.universe_size() != n || b.is_empty() || (seen & b.bits()) != 0) {
                return false;
            }
            seen |= b.bits();
        }
        return seen == Subset::window(n);
    }

    friend bool operator==(const Partition&, const Partition&) = default;
};

}  // namespace tanglekit
