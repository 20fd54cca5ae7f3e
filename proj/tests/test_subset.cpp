#include <doctest.h>

#include "tanglekit/subset.hpp"
#include "tanglekit/text.hpp"

using namespace tanglekit;

TEST_CASE("subset basics") {
    auto x = Subset::of(5, {0, 3});
    CHECK(x.size() == 2);
    CHECK(x.contains(3));
    CHECK_FALSE(x.contains(4));
    CHECK(x.complement() == Subset::of(5, {1, 2, 4}));
    CHECK((x | x.complement()).is_full());
    CHECK(x.is_proper());
    CHECK_FALSE(Subset::empty(5).is_proper());
    CHECK(x.elements() == std::vector<std::size_t>{0, 3});
    CHECK(x.lowest() == 0);
    CHECK((x - Subset::of(5, {0})) == Subset::of(5, {3}));
}

TEST_CASE("subset rejects out of range elements") {
    CHECK_THROWS_AS(Subset::singleton(3, 3), std::out_of_range);
    CHECK_THROWS_AS(Subset::of(3, {0, 5}), std::out_of_range);
    CHECK_THROWS_AS(Subset(65, 1), std::length_error);
}

TEST_CASE("subset order is bit order") {
    CHECK(Subset::of(4, {0, 1}) < Subset::of(4, {2}));
    CHECK(Subset::of(4, {3}) > Subset::of(4, {0, 1, 2}));
    CHECK(Subset::full(64).size() == 64);
}

TEST_CASE("partition normalizes and refines") {
    Partition p{{Subset::of(4, {2, 3}), Subset::of(4, {0, 1})}};
    CHECK(p.blocks.front() == Subset::of(4, {0, 1}));
    CHECK(p.is_valid(4));
    CHECK(Partition::singletons(4).refines(p));
    CHECK_FALSE(p.refines(Partition::singletons(4)));
    CHECK(p.block_of(3) == Subset::of(4, {2, 3}));
    Partition overlapping{{Subset::of(3, {0, 1}), Subset::of(3, {1, 2})}};
    CHECK_FALSE(overlapping.is_valid(3));
}

TEST_CASE("text helpers") {
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 0.0) == "inf");
    CHECK(format_subset(Subset::of(3, {0, 2})) == "{0,2}");
    CHECK(format_subset(Subset::of(3, {0, 2}), {"a", "b", "c"}) == "{a,c}");
}
