#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tanglekit/clustering.hpp"
#include "tanglekit/errors.hpp"
#include "tanglekit/random_instances.hpp"

using namespace tanglekit;
using fixtures::fig2_metric;
using fixtures::l4_metric;
using fixtures::partition_of;
using fixtures::set_of;

namespace {

bool has_issue(const DendogramReport& r, DendogramCondition c) {
    return std::any_of(r.issues.begin(), r.issues.end(), [c](const DendogramIssue& i) { return i.condition == c; });
}

// Same step function: compare at every radius and just below/above each step.
bool same_step_function(const Dendogram& a, const Dendogram& b) {
    std::vector<double> probes{0.0, 1e9};
    for (const auto* d : {&a, &b}) {
        for (double r : d->radii) {
            probes.push_back(r);
            probes.push_back(std::nextafter(r, 0.0));
            probes.push_back(std::nextafter(r, 1e300));
        }
    }
    for (double r : probes) {
        if (dendogram_evaluate(a, r) != dendogram_evaluate(b, r)) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("single linkage on fig2") {
    auto m = fig2_metric();
    auto d = single_linkage(m);
    CHECK(d.radii == std::vector<double>{0, 1, 2, 3, 5});
    CHECK(d.partitions[1] == partition_of(m, {{"a"}, {"b"}, {"c", "d"}, {"e", "f"}, {"g"}}));
    CHECK(d.partitions[2] == partition_of(m, {{"a", "b"}, {"c", "d"}, {"e", "f", "g"}}));
    CHECK(d.partitions[3] == partition_of(m, {{"a", "b"}, {"c", "d", "e", "f", "g"}}));
    CHECK(d.partitions[4] == Partition{{Subset::full(7)}});
    CHECK(validate_dendogram(d).ok());

    CHECK(dendogram_evaluate(d, 2.5) == partition_of(m, {{"a", "b"}, {"c", "d"}, {"e", "f", "g"}}));
    CHECK(dendogram_evaluate(d, 0.0) == Partition::singletons(7));
    CHECK(dendogram_evaluate(d, 1e6) == Partition{{Subset::full(7)}});
    CHECK(dendogram_evaluate(d, std::nextafter(1.0, 0.0)) == Partition::singletons(7));
    CHECK_THROWS_AS(dendogram_evaluate(d, -1.0), std::invalid_argument);
}

TEST_CASE("single linkage merges ties at once") {
    auto l4 = l4_metric();
    auto d = single_linkage(l4);
    CHECK(d.radii == std::vector<double>{0, 1, 2});
    CHECK(d.partitions[1] == partition_of(l4, {{"1", "2"}, {"-1", "-2"}}));

    auto one = single_linkage(DistanceMatrix({"x"}, {{0.0}}));
    CHECK(one.radii == std::vector<double>{0});
    CHECK(one.partitions[0] == Partition{{Subset::full(1)}});
    CHECK(validate_dendogram(one).ok());
}

TEST_CASE("tie tolerance") {
    auto m = DistanceMatrix({"x", "y", "z"}, {{0, 1, 2}, {1, 0, 1.0000001}, {2, 1.0000001, 0}});
    CHECK(single_linkage(m).radii.size() == 3);
    auto loose = single_linkage(m, 1e-3);
    CHECK(loose.radii == std::vector<double>{0, 1});
}

TEST_CASE("single linkage equals threshold components") {
    Rng rng(12);
    for (int t = 0; t < 30; ++t) {
        auto m = random_integer_metric(rng, 2 + t % 7);
        auto d = single_linkage(m);
        CHECK(validate_dendogram(d).ok());
        for (double r = 0; r <= 10; r += 0.5) {
            CHECK(dendogram_evaluate(d, r) == oracle::threshold_components(m, r));
        }
    }
}

TEST_CASE("validate_dendogram catches broken inputs") {
    auto m = fig2_metric();
    auto good = single_linkage(m);

    auto no_top = good;
    no_top.radii.pop_back();
    no_top.partitions.pop_back();
    CHECK(has_issue(validate_dendogram(no_top), DendogramCondition::single_block));

    auto crossed = good;
    crossed.partitions[2] = partition_of(m, {{"a", "c"}, {"b", "d"}, {"e", "f", "g"}});
    CHECK(has_issue(validate_dendogram(crossed), DendogramCondition::refinement));

    auto late = good;
    late.radii[0] = 0.5;
    CHECK_FALSE(validate_dendogram(late).ok());

    auto unsorted = good;
    std::swap(unsorted.radii[1], unsorted.radii[2]);
    CHECK(has_issue(validate_dendogram(unsorted), DendogramCondition::structure));

    auto repeated = good;
    repeated.partitions[2] = repeated.partitions[1];
    CHECK(has_issue(validate_dendogram(repeated), DendogramCondition::refinement));

    auto not_singletons = good;
    not_singletons.partitions[0] = not_singletons.partitions[1];
    CHECK(has_issue(validate_dendogram(not_singletons), DendogramCondition::singletons_at_zero));

    CHECK_THROWS_AS(psi(crossed), std::invalid_argument);
}

TEST_CASE("psi") {
    auto m = fig2_metric();
    auto u = psi(single_linkage(m));
    auto at = [&](const char* x, const char* y) { return u(m.index_of(x), m.index_of(y)); };
    CHECK(at("c", "d") == 1.0);
    CHECK(at("b", "g") == 5.0);
    CHECK(at("e", "g") == 2.0);
    CHECK(at("a", "a") == 0.0);
    CHECK_FALSE(ultrametric_check(u.matrix()).has_value());

    auto l4 = l4_metric();
    auto v = psi(single_linkage(l4));
    CHECK(v(l4.index_of("1"), l4.index_of("2")) == 1.0);
    CHECK(v(l4.index_of("1"), l4.index_of("-1")) == 2.0);
}

TEST_CASE("psi inverse") {
    Rng rng(14);
    for (int t = 0; t < 30; ++t) {
        auto d = random_dendogram(rng, 1 + t % 9);
        REQUIRE(validate_dendogram(d).ok());
        auto u = psi(d);
        CHECK(psi_inverse(u) == d);
        CHECK(psi(psi_inverse(u)) == u);
    }
    auto c = DistanceMatrix({"x", "y", "z"}, {{0, 4, 4}, {4, 0, 4}, {4, 4, 0}});
    auto d = psi_inverse(Ultrametric{c});
    CHECK(d.radii == std::vector<double>{0, 4});

    auto m = fig2_metric();
    CHECK(same_step_function(psi_inverse(minimax_ultrametric(m)), single_linkage(m)));
}

TEST_CASE("minimax") {
    auto m = fig2_metric();
    auto u = minimax_ultrametric(m);
    CHECK(u(m.index_of("b"), m.index_of("g")) == 5.0);
    for (std::size_t x = 0; x < 7; ++x) {
        for (std::size_t y = 0; y < 7; ++y) {
            CHECK(u(x, y) == oracle::bottleneck(m, x, y));
        }
    }
    CHECK(u == psi(single_linkage(m)));
    CHECK(minimax_ultrametric(u.matrix()) == u);
    auto two = fixtures::pair_metric(2.5);
    CHECK(minimax_ultrametric(two).matrix() == two);
}

TEST_CASE("kappa from a dendogram") {
    auto m = fig2_metric();
    auto d = single_linkage(m);
    auto f = kappa_from_dendogram(d);
    CHECK(f(set_of(m, {"c", "d"})) == std::exp(-3.0));
    CHECK(f(Subset::empty(7)) == 0.0);
    CHECK(f(set_of(m, {"a"})) == std::exp(-2.0));
    CHECK_FALSE(find_violation(SetProperty::max_submodular, f).has_value());
    CHECK(check_axioms(f).ok());
}

TEST_CASE("dendogram from kappa") {
    auto l4 = l4_metric();
    auto f = mind_function(l4);
    auto u = kappa_ultrametric(f, l4.labels());
    CHECK(u(l4.index_of("1"), l4.index_of("2")) == 1.0);
    CHECK(u(l4.index_of("2"), l4.index_of("-2")) == 2.0);
    CHECK(dendogram_from_kappa(f, l4.labels()) == single_linkage(l4));

    auto two = fixtures::pair_metric(3.0);
    auto d = dendogram_from_kappa(mind_function(two), two.labels());
    CHECK(d.radii == std::vector<double>{0, 3});

    Rng rng(15);
    for (int t = 0; t < 20; ++t) {
        auto dd = random_dendogram(rng, 2 + t % 7);
        CHECK(dendogram_from_kappa(kappa_from_dendogram(dd), dd.labels) == dd);
    }
}

TEST_CASE("dendogram from kappa refuses bad functions") {
    TabulatedFunction zero{3, std::vector<double>(8, 0.0), Axis::value};
    CHECK_THROWS_AS(dendogram_from_kappa(make_function(zero), {"x", "y", "z"}), std::invalid_argument);

    TabulatedFunction big{2, {0.0, 1.5, 1.5, 0.0}, Axis::value};
    CHECK_THROWS_AS(dendogram_from_kappa(make_function(big), {"x", "y"}), std::invalid_argument);

    auto phi = make_function(AverageLinkage{l4_metric()});
    CHECK_THROWS_AS(dendogram_from_kappa(phi, l4_metric().labels()), NotMaxSubmodularError);

    Rng rng(3);
    CHECK_THROWS_AS(dendogram_from_kappa(mind_function(random_integer_metric(rng, 17)), default_labels(17)),
                    SizeCapError);
}

TEST_CASE("block intervals") {
    auto m = fig2_metric();
    auto blocks = block_intervals(single_linkage(m));
    std::vector<BlockInterval> want{{set_of(m, {"c", "d"}), 1, 3},
                                    {set_of(m, {"e", "f"}), 1, 2},
                                    {set_of(m, {"a", "b"}), 2, 5},
                                    {set_of(m, {"e", "f", "g"}), 2, 3},
                                    {set_of(m, {"c", "d", "e", "f", "g"}), 3, 5},
                                    {Subset::full(7), 5, std::numeric_limits<double>::infinity()}};
    CHECK(blocks == want);
}

TEST_CASE("blocks and tangles correspond") {
    for (auto m : {fig2_metric(), l4_metric(), fixtures::pair_metric(2.0)}) {
        auto r = block_tangle_correspondence(m);
        CHECK(r.ok());
        CHECK(r.blocks.size() == r.catalog.entries.size());
    }
    auto l4 = l4_metric();
    auto r = block_tangle_correspondence(l4);
    std::vector<double> births;
    for (auto& b : r.blocks) {
        births.push_back(b.r_lo);
    }
    CHECK(births == std::vector<double>{1, 1, 2});
}

TEST_CASE("linkage values") {
    auto m = fig2_metric();
    CHECK(linkage_eval(Linkage::single, m, set_of(m, {"c", "d"}), set_of(m, {"e", "f"})) == 3.0);
    auto l4 = l4_metric();
    CHECK(linkage_eval(Linkage::complete, l4, set_of(l4, {"1", "2"}), set_of(l4, {"-1", "-2"})) == 4.0);
    CHECK(linkage_eval(Linkage::average, l4, set_of(l4, {"1"}), set_of(l4, {"2"})) == 1.0);
    CHECK_THROWS_AS(linkage_eval(Linkage::single, l4, set_of(l4, {"1"}), set_of(l4, {"1", "2"})), std::invalid_argument);
    CHECK_THROWS_AS(linkage_eval(Linkage::single, l4, Subset::empty(4), set_of(l4, {"2"})), std::invalid_argument);
}

TEST_CASE("all partitions") {
    CHECK(all_partitions(1).size() == 1);
    CHECK(all_partitions(4).size() == 15);
    CHECK(all_partitions(6).size() == 203);
    for (auto& p : all_partitions(5)) {
        CHECK(p.is_valid(5));
    }
    CHECK_THROWS_AS(all_partitions(11), SizeCapError);
}

TEST_CASE("linkage remarks") {
    CHECK_FALSE(single_linkage_identity_violation(fig2_metric()).has_value());
    CHECK_FALSE(single_linkage_identity_violation(l4_metric()).has_value());
    CHECK(average_linkage_aggregation_error(fig2_metric()) < 1e-12);

    auto cl = complete_linkage_mismatch(l4_metric());
    REQUIRE(cl.has_value());
    CHECK(cl->lhs != cl->rhs);
}
