#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tanglekit/random_instances.hpp"
#include "tanglekit/tangle.hpp"

using namespace tanglekit;
using fixtures::fig2_metric;
using fixtures::l4_metric;
using fixtures::set_of;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("tangle_contains") {
    auto m = fig2_metric();
    auto f = mind_function(m);
    TangleDescriptor t{Order::from_radius(1.0), set_of(m, {"c", "d"})};
    CHECK(f(set_of(m, {"c", "d", "e", "f", "g"})) == std::exp(-5.0));
    CHECK(tangle_contains(t, f, set_of(m, {"c", "d", "e", "f", "g"})));
    CHECK_FALSE(tangle_contains(t, f, set_of(m, {"a", "b"})));
    CHECK_FALSE(tangle_contains(t, f, set_of(m, {"c"})));
}

TEST_CASE("verify_tangle") {
    auto m = fig2_metric();
    auto f = mind_function(m);
    TangleDescriptor good{Order::from_radius(1.0), set_of(m, {"c", "d"})};
    CHECK(verify_tangle(f, good).ok());

    auto l4 = l4_metric();
    auto g = mind_function(l4);
    TangleDescriptor low{Order::from_radius(0.5), set_of(l4, {"1", "2"})};
    auto r = verify_tangle(g, low);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations[0].axiom == TangleAxiom::t1);
    CHECK(r.violations[0].witness[0] == set_of(l4, {"1"}));
    CHECK_FALSE(oracle::is_tangle(g, g.level(low.order), induced_family(low, g)));

    auto two = mind_function(fixtures::pair_metric(3.0));
    TangleDescriptor whole{Order::from_radius(3.0), Subset::full(2)};
    auto r2 = verify_tangle(two, whole);
    CHECK(r2.ok());
    CHECK(r2.family_size == 1);
}

TEST_CASE("verify_family reports each axiom") {
    auto l4 = l4_metric();
    auto f = mind_function(l4);
    auto k = Order::from_radius(1.0);
    auto has = [](const TangleReport& r, TangleAxiom a) {
        for (auto& v : r.violations) {
            if (v.axiom == a) {
                return true;
            }
        }
        return false;
    };
    CHECK(has(verify_family(f, k, {set_of(l4, {"1"})}), TangleAxiom::t0));
    CHECK(has(verify_family(f, k, {}), TangleAxiom::t1));
    std::vector<Subset> singles;
    for (std::size_t i = 0; i < 4; ++i) {
        singles.push_back(Subset::singleton(4, i));
    }
    CHECK(has(verify_family(f, k, singles), TangleAxiom::t3));
    CHECK(has(verify_family(f, k, {set_of(l4, {"1", "2"}), set_of(l4, {"-1", "-2"})}), TangleAxiom::t2));
}

TEST_CASE("catalog on the line") {
    auto l4 = l4_metric();
    auto c = enumerate_tangles(mind_function(l4));
    std::vector<CatalogEntry> want{{set_of(l4, {"1", "2"}), 1, 2},
                                   {set_of(l4, {"-1", "-2"}), 1, 2},
                                   {Subset::full(4), 2, kInf}};
    CHECK(c.entries == want);
    CHECK(c.alive_at(1.5).size() == 2);
    CHECK(c.alive_at(0.5).empty());
}

TEST_CASE("catalog on fig2") {
    auto m = fig2_metric();
    auto f = mind_function(m);
    auto c = enumerate_tangles(f);
    std::vector<CatalogEntry> want{{set_of(m, {"c", "d"}), 1, 3},
                                   {set_of(m, {"e", "f"}), 1, 2},
                                   {set_of(m, {"a", "b"}), 2, 5},
                                   {set_of(m, {"e", "f", "g"}), 2, 3},
                                   {set_of(m, {"c", "d", "e", "f", "g"}), 3, 5},
                                   {Subset::full(7), 5, kInf}};
    CHECK(c.entries == want);

    for (auto& e : c.entries) {
        CAPTURE(e.r_lo);
        TangleDescriptor born{Order::from_radius(e.r_lo), e.core};
        CHECK(verify_tangle(f, born).ok());
        CHECK(oracle::is_tangle(f, f.level(born.order), induced_family(born, f)));
        if (e.r_hi < kInf) {
            TangleDescriptor dying{Order::from_radius(std::nextafter(e.r_hi, 0.0)), e.core};
            CHECK(verify_tangle(f, dying).ok());
        }
    }
}

TEST_CASE("catalog edge cases") {
    CHECK(enumerate_tangles(mind_function(DistanceMatrix({"x"}, {{0.0}}))).entries.empty());
    auto c = enumerate_tangles(mind_function(fixtures::pair_metric(3.0)));
    REQUIRE(c.entries.size() == 1);
    CHECK(c.entries[0].core == Subset::full(2));
    CHECK(c.entries[0].r_lo == 3.0);
}

TEST_CASE("enumerate_tangles refuses non max-submodular input") {
    auto f = make_function(AverageLinkage{l4_metric()});
    CHECK_THROWS_AS(enumerate_tangles(f), NotMaxSubmodularError);
}

TEST_CASE("tangle_number") {
    CHECK(tangle_number(mind_function(fig2_metric())).value() == std::exp(-1.0));
    CHECK(tangle_number(mind_function(l4_metric())).radius() == 1.0);
    CHECK(tangle_number(mind_function(fixtures::pair_metric(3.0))).radius() == 3.0);
    CHECK(tangle_number(mind_function(DistanceMatrix({"x"}, {{0.0}}))).value() == 0.0);
}

TEST_CASE("catalog tangles are closed and exhaustive") {
    Rng rng(21);
    for (int t = 0; t < 15; ++t) {
        const std::size_t n = 4 + t % 4;
        auto m = random_integer_metric(rng, n, 6);
        auto f = mind_function(m);
        auto c = enumerate_tangles(f);
        std::set<double> radii;
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                radii.insert(m(u, v));
            }
        }
        for (double r : radii) {
            auto level = f.level(Order::from_radius(r));
            // every cataloged core alive at r induces a tangle, closed under supersets and meets
            for (auto& e : c.alive_at(r)) {
                auto fam = oracle::family(f, level, e.core);
                CHECK(oracle::is_tangle(f, level, fam));
                for (auto x : fam) {
                    for (auto y : fam) {
                        if (f.level(x & y) < level) {
                            CHECK(std::find(fam.begin(), fam.end(), x & y) != fam.end());
                        }
                    }
                }
            }
            // and every tangle found by brute force over all cores is one of them
            std::set<std::vector<Subset>> listed, found;
            for (auto& e : c.alive_at(r)) {
                listed.insert(oracle::family(f, level, e.core));
            }
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
                auto fam = oracle::family(f, level, Subset{n, b});
                if (oracle::is_tangle(f, level, fam)) {
                    found.insert(fam);
                }
            }
            CHECK(listed == found);
        }
    }
}
