#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tanglekit/errors.hpp"
#include "tanglekit/formats.hpp"
#include "tanglekit/random_instances.hpp"

using namespace tanglekit;
using fixtures::fig2_metric;
using fixtures::l4_metric;

TEST_CASE("points csv") {
    auto c = read_points_csv("label,x,y\n# comment\np,0,1\nq,2.5,-1\n");
    CHECK(c.labels == std::vector<std::string>{"p", "q"});
    CHECK(c.coords[1] == std::vector<double>{2.5, -1.0});
    CHECK(read_points_csv(write_points_csv(c)).coords == c.coords);

    CHECK_THROWS_AS(read_points_csv(""), InputError);
    CHECK_THROWS_AS(read_points_csv("label,x\np,1,2\n"), InputError);
    CHECK_THROWS_AS(read_points_csv("label,x\np,abc\n"), InputError);
    CHECK_THROWS_AS(read_points_csv("label,x\np,1\np,2\n"), InputError);
    CHECK_THROWS_AS(read_points_csv("label,x\n\"p\",1\n"), InputError);
    CHECK_THROWS_AS(read_points_csv("label,x\np,inf\n"), InputError);
}

TEST_CASE("matrix csv round trip") {
    auto m = fig2_metric();
    auto text = write_matrix_csv(m);
    auto raw = read_matrix_csv(text);
    CHECK(raw.labels == m.labels());
    CHECK(DistanceMatrix(raw.labels, raw.rows) == m);

    CHECK_THROWS_AS(read_matrix_csv("label,x,y\nx,0,1\n"), InputError);
    CHECK_THROWS_AS(read_matrix_csv("label,x,y\ny,0,1\nx,1,0\n"), InputError);
}

TEST_CASE("dendogram json round trip") {
    auto m = fig2_metric();
    auto d = single_linkage(m);
    auto j = dendogram_to_json(d);
    CHECK(j["steps"].size() == 5);
    CHECK(j["steps"][1]["r"] == 1.0);
    CHECK(j["steps"][2]["blocks"][2] == Json::array({"e", "f", "g"}));
    auto back = dendogram_from_json(j);
    CHECK(back == d);
    CHECK(back.labels == d.labels);

    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        auto r = random_dendogram(rng, 1 + t % 8);
        CHECK(dendogram_from_json(parse_json(dendogram_to_json(r).dump(), "x")) == r);
    }

    CHECK_THROWS_AS(dendogram_from_json(parse_json(R"({"labels":["a"]})", "x")), InputError);
    CHECK_THROWS_AS(dendogram_from_json(parse_json(R"({"labels":["a","b"],"steps":[{"r":0,"blocks":[["a"],["c"]]}]})", "x")),
                    InputError);
    CHECK_THROWS_AS(parse_json("{", "x"), InputError);
}

TEST_CASE("tabulated json round trip") {
    auto d = single_linkage(fig2_metric());
    auto f = kappa_from_dendogram(d);
    auto j = tabulated_to_json(f, d.labels);
    CHECK(j["n"] == 7);
    CHECK(j["values"].size() == 128);
    auto back = tabulated_from_json(parse_json(j.dump(), "x"));
    CHECK(back.labels == d.labels);
    auto g = make_function(back.table);
    for (std::uint64_t b = 0; b < 128; ++b) {
        CHECK(g.level(Subset{7, b}) == f.level(Subset{7, b}));
    }

    auto plain = tabulated_from_json(parse_json(R"({"n":2,"values":[0,0.5,0.5,0]})", "x"));
    CHECK(plain.labels == std::vector<std::string>{"0", "1"});
    CHECK(plain.table.axis == Axis::value);
    CHECK_THROWS_AS(tabulated_from_json(parse_json(R"({"n":2,"values":[0,0.5,0.5]})", "x")), InputError);
}

TEST_CASE("catalog json") {
    auto l4 = l4_metric();
    auto j = catalog_to_json(enumerate_tangles(mind_function(l4)), l4.labels());
    REQUIRE(j["entries"].size() == 3);
    CHECK(j["entries"][0]["core"] == Json::array({"1", "2"}));
    CHECK(j["entries"][0]["r_lo"] == 1.0);
    CHECK(j["entries"][2]["r_hi"] == "inf");
}

TEST_CASE("pre-decomposition json") {
    auto m = fig2_metric();
    auto j = parse_json(read_text_file(fixtures::data_path("fig1b_predecomposition.json")), "fig1b");
    auto pd = pre_decomposition_from_json(j, m.labels());
    auto again = pre_decomposition_from_json(pre_decomposition_to_json(pd, m.labels()), m.labels());
    CHECK(again == pd);

    auto bad = j;
    bad["gamma"]["B->A"] = Json::array({"z"});
    CHECK_THROWS_AS(pre_decomposition_from_json(bad, m.labels()), InputError);
    auto missing = j;
    missing["gamma"].erase("B->A");
    CHECK_THROWS_AS(pre_decomposition_from_json(missing, m.labels()), InputError);
    auto both = j;
    both["gamma"]["A->B"] = Json::array({"a"});
    CHECK_THROWS_AS(pre_decomposition_from_json(both, m.labels()), InputError);
    both["gamma"]["A->B"] = Json::array({"a", "b"});
    CHECK(pre_decomposition_from_json(both, m.labels()) == pd);
}

TEST_CASE("graph json") {
    auto g = graph_from_json(parse_json(R"({"vertices":["u","v","w"],"edges":[["u","v"],["v","w"]]})", "x"));
    CHECK(g.vertex_weights == std::vector<double>{1, 1, 1});
    CHECK(g.edge_labels == std::vector<std::string>{"e0", "e1"});
    CHECK(g.edges[1] == std::pair<std::size_t, std::size_t>{1, 2});
    CHECK_THROWS_AS(graph_from_json(parse_json(R"({"vertices":["u"],"edges":[["u","q"]]})", "x")), InputError);
}

TEST_CASE("dot export keeps the atoms") {
    auto m = fig2_metric();
    auto f = mind_function(m);
    auto pd = exactness_transform(
        pre_decomposition_from_json(parse_json(read_text_file(fixtures::data_path("fig1b_predecomposition.json")), "x"),
                                    m.labels()),
        f);
    auto dot = decomposition_to_dot(pd, f, m.labels());
    CHECK(dot.rfind("graph decomposition {", 0) == 0);
    auto atoms = oracle::dot_atoms(dot);
    REQUIRE(atoms.size() == pd.atoms().size());
    for (auto [leaf, atom] : pd.atoms()) {
        std::vector<std::string> want;
        for (auto i : atom.elements()) {
            want.push_back(m.label(i));
        }
        CHECK(atoms.at(pd.tree().id(leaf)) == want);
    }
    CHECK(dot.find("κ=") != std::string::npos);
    CHECK(decomposition_to_dot(pd, f, m.labels()) == dot);
}

TEST_CASE("newick export") {
    auto d = single_linkage(fig2_metric());
    CHECK(dendogram_to_newick(d) == "((a:2,b:2)r=2:3,((c:1,d:1)r=1:2,((e:1,f:1)r=1:1,g:2)r=2:1)r=3:2)r=5;\n");
    auto one = single_linkage(DistanceMatrix({"x"}, {{0.0}}));
    CHECK(dendogram_to_newick(one) == "x;\n");
}
