// Acceptance suite: prints one PASS/FAIL line per criterion, exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "tanglekit/clustering.hpp"
#include "tanglekit/decomposition.hpp"
#include "tanglekit/formats.hpp"
#include "tanglekit/random_instances.hpp"
#include "tanglekit/tangle.hpp"
#include "tanglekit/text.hpp"

using namespace tanglekit;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
    bool ok = true;
    std::string detail;
    std::vector<std::string> failures;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (failures.size() < 5) {
                failures.push_back(what);
            }
        }
    }
};

// Mix of integer shortest-path metrics (many ties) and Euclidean point sets.
DistanceMatrix random_metric(Rng& rng, std::size_t n, int trial) {
    if (trial % 2 == 0) {
        return random_integer_metric(rng, n);
    }
    return distance_matrix_from_points(random_points(rng, n));
}

std::vector<Subset> all_subsets(std::size_t n) {
    std::vector<Subset> out;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
        out.push_back(Subset{n, b});
    }
    return out;
}

Outcome ac1() {
    Outcome o;
    std::ostringstream out, err;
    int code = cli::run({"tangles", "cluster", "--input", fixtures::data_path("fig2_points.csv"), "--format", "points"},
                        out, err);
    o.require(code == cli::pass, "cluster exit code " + std::to_string(code));
    auto d = dendogram_from_json(parse_json(out.str(), "cluster output"));
    o.require(d.radii == std::vector<double>{0, 1, 2, 3, 5}, "merge radii");
    auto m = fixtures::fig2_metric();
    using fixtures::partition_of;
    std::vector<Partition> want{Partition::singletons(7),
                                partition_of(m, {{"a"}, {"b"}, {"c", "d"}, {"e", "f"}, {"g"}}),
                                partition_of(m, {{"a", "b"}, {"c", "d"}, {"e", "f", "g"}}),
                                partition_of(m, {{"a", "b"}, {"c", "d", "e", "f", "g"}}),
                                Partition{{Subset::full(7)}}};
    o.require(d.partitions == want, "partitions");
    o.detail = "radii {1,2,3,5}";
    return o;
}

Outcome ac2() {
    Outcome o;
    auto l4 = fixtures::l4_metric();
    auto f = mind_function(l4);
    auto v = find_violation(SetProperty::submodular, f);
    auto x = fixtures::set_of(l4, {"1", "2"});
    auto y = fixtures::set_of(l4, {"1", "-1"});
    o.require(v && v->first == x && v->second == y, "submodular witness on L4");
    o.require(f(x) + f(y) < 2 * std::exp(-1.0) &&
                  std::abs(f(x) + f(y) - (std::exp(-2.0) + std::exp(-1.0))) < 1e-15,
              "e^-2 + e^-1 < 2e^-1");
    o.require(!find_violation(SetProperty::max_submodular, f), "max-submodular on L4");
    Rng rng(2002);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + t % 7;
        auto m = random_metric(rng, n, t);
        auto g = mind_function(m);
        auto w = find_violation(SetProperty::max_submodular, g);
        o.require(!w, "max-submodular violated on random instance " + std::to_string(t));
        if (t < 40) {
            o.require(w == oracle::violation(SetProperty::max_submodular, g), "naive sweep disagrees");
        }
    }
    o.detail = "L4 witness ({1,2},{1,-1}); 200 random metrics max-submodular";
    return o;
}

Outcome ac3() {
    Outcome o;
    Rng rng(3003);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 4 + t % 4;
        auto m = random_metric(rng, n, t);
        auto f = mind_function(m);
        auto r = verify_duality(f);
        const auto tn = f.level(r.tangle_number);
        const auto bw = f.level(r.branch_width);
        o.require(r.equal && tn == bw, "tn != bw on instance " + std::to_string(t));
        o.require(bw == oracle::branch_width_level(f), "branch width oracle disagrees on " + std::to_string(t));
        auto v = validate_pre_decomposition(r.witness);
        o.require(v.is_branch_decomposition(), "witness not a branch decomposition");
        o.require(oracle::width_level(r.witness, f) == bw, "witness width");
    }
    o.detail = "50 random metrics, n in 4..7";
    return o;
}

bool atoms_shrink(const PreDecomposition& in, const PreDecomposition& out) {
    for (auto [leaf, atom] : out.atoms()) {
        if (!atom.is_subset_of(in.atom(in.tree().index_of(out.tree().id(leaf))))) {
            return false;
        }
    }
    return true;
}

void check_exactify(Outcome& o, const PreDecomposition& in, const ConnectivityFunction& f, const std::string& name) {
    auto out = exactness_transform(in, f);
    o.require(validate_pre_decomposition(out).is_decomposition(), name + ": not exact");
    o.require(oracle::width_level(out, f) <= oracle::width_level(in, f), name + ": width grew");
    o.require(atoms_shrink(in, out), name + ": atom grew");
    o.require(exactness_transform(out, f) == out, name + ": not idempotent");
}

Outcome ac4() {
    Outcome o;
    auto m = fixtures::fig2_metric();
    auto fig1b = pre_decomposition_from_json(
        parse_json(read_text_file(fixtures::data_path("fig1b_predecomposition.json")), "fig1b"), m.labels());
    check_exactify(o, fig1b, mind_function(m), "fig1b");
    Rng rng(4004);
    std::size_t inexact = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + t % 9;
        auto metric = random_metric(rng, n, t);
        std::uniform_int_distribution<std::size_t> leaves(2, n + 3);
        auto pd = oracle::random_pre_decomposition(rng, n, leaves(rng));
        inexact += validate_pre_decomposition(pd).exact() ? 0 : 1;
        check_exactify(o, pd, mind_function(metric), "random " + std::to_string(t));
    }
    o.detail = "fig1b + 100 random pre-decompositions (" + std::to_string(inexact) + " inexact on input)";
    return o;
}

void check_correspondence(Outcome& o, const DistanceMatrix& m, const std::string& name) {
    auto r = block_tangle_correspondence(m);
    o.require(r.ok(), name + ": correspondence report failed");
    auto f = mind_function(m);
    auto d = single_linkage(m);
    for (auto& e : r.catalog.entries) {
        TangleDescriptor t{Order::from_radius(e.r_lo), e.core};
        o.require(verify_tangle(f, t).ok(), name + ": catalog tangle fails verify_tangle");
        o.require(dendogram_evaluate(d, e.r_lo).block_of(e.core.lowest()) == e.core, name + ": core is not a block");
    }
    for (auto& b : r.blocks) {
        o.require(verify_tangle(f, TangleDescriptor{Order::from_radius(b.r_lo), b.block}).ok(),
                  name + ": block fails verify_tangle");
    }
    std::vector<std::pair<Subset, std::pair<double, double>>> blocks, cores;
    for (auto& b : r.blocks) {
        blocks.push_back({b.block, {b.r_lo, b.r_hi}});
    }
    for (auto& e : r.catalog.entries) {
        cores.push_back({e.core, {e.r_lo, e.r_hi}});
    }
    std::sort(blocks.begin(), blocks.end());
    std::sort(cores.begin(), cores.end());
    o.require(blocks == cores, name + ": intervals differ");
}

Outcome ac5() {
    Outcome o;
    check_correspondence(o, fixtures::fig2_metric(), "fig2");
    check_correspondence(o, fixtures::l4_metric(), "L4");
    auto m = fixtures::fig2_metric();
    auto cat = enumerate_tangles(mind_function(m));
    using fixtures::set_of;
    std::vector<CatalogEntry> want{{set_of(m, {"c", "d"}), 1, 3},
                                   {set_of(m, {"e", "f"}), 1, 2},
                                   {set_of(m, {"a", "b"}), 2, 5},
                                   {set_of(m, {"e", "f", "g"}), 2, 3},
                                   {set_of(m, {"c", "d", "e", "f", "g"}), 3, 5},
                                   {Subset::full(7), 5, kInf}};
    o.require(cat.entries == want, "fig2 catalog");
    Rng rng(5005);
    for (int t = 0; t < 50; ++t) {
        check_correspondence(o, random_metric(rng, 2 + t % 7, t), "random " + std::to_string(t));
    }
    o.detail = "fig2, L4, 50 random metrics";
    return o;
}

Outcome ac6() {
    Outcome o;
    Rng rng(6006);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + t % 7;
        auto m = random_metric(rng, n, t);
        auto f = mind_function(m);
        auto u = kappa_ultrametric(f, m.labels());
        o.require(!ultrametric_check(u.matrix()), "u_kappa not ultrametric");
        for (auto x : all_subsets(n)) {
            double a = f(x);
            double b = eval_mind(u.matrix(), x);
            o.require(std::abs(a - b) <= 1e-12 * std::abs(a), "mind over u_kappa differs");
        }
    }
    for (int t = 0; t < 50; ++t) {
        auto d = random_dendogram(rng, 1 + t % 8);
        o.require(dendogram_from_kappa(kappa_from_dendogram(d), d.labels) == d, "kappa round trip");
    }
    o.detail = "50 metrics, 50 dendograms";
    return o;
}

Outcome ac7() {
    Outcome o;
    Rng rng(7007);
    for (int t = 0; t < 50; ++t) {
        auto d = random_dendogram(rng, 1 + t % 8);
        o.require(psi_inverse(psi(d)) == d, "psi round trip");
    }
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + t % 6;
        auto m = random_metric(rng, n, t);
        auto u = minimax_ultrametric(m);
        o.require(u == psi(single_linkage(m)), "minimax != psi(single linkage)");
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                o.require(u(x, y) == oracle::bottleneck(m, x, y), "bottleneck oracle");
            }
        }
    }
    for (int t = 0; t < 50; ++t) {
        auto u = psi(random_dendogram(rng, 2 + t % 7));
        o.require(psi(single_linkage(u.matrix())) == u, "ultrametric is not a fixed point");
        o.require(minimax_ultrametric(u.matrix()) == u, "minimax moves an ultrametric");
    }
    o.detail = "50 dendograms, 50 metrics (n<=7 all-paths oracle), 50 ultrametrics";
    return o;
}

Outcome ac8() {
    Outcome o;
    Rng rng(8008);
    std::vector<DistanceMatrix> instances{fixtures::fig2_metric(), fixtures::l4_metric()};
    for (int t = 0; t < 20; ++t) {
        instances.push_back(random_metric(rng, 2 + t % 7, t));
    }
    bool cl_found = false;
    for (auto& m : instances) {
        o.require(!single_linkage_identity_violation(m), "single linkage identity fails");
        o.require(average_linkage_aggregation_error(m) <= 1e-12, "average linkage aggregation");
        cl_found = cl_found || complete_linkage_mismatch(m).has_value();
    }
    o.require(cl_found, "no complete linkage mismatch found");

    bool phi_max = false, phi_sub = false;
    for (int t = 0; t < 400 && !(phi_max && phi_sub); ++t) {
        auto m = t == 0 ? fixtures::l4_metric() : random_metric(rng, 3 + t % 4, t);
        auto phi = make_function(AverageLinkage{m});
        phi_max = phi_max || find_violation(SetProperty::max_submodular, phi).has_value();
        phi_sub = phi_sub || find_violation(SetProperty::submodular, phi).has_value();
    }
    o.require(phi_max, "no phi-dist max-submodular violation for n <= 6");
    o.require(phi_sub, "no phi-dist submodular violation for n <= 6");

    std::size_t graphs = 0;
    bool nu_max = false;
    for (const auto& edges : oracle::small_graphs(6)) {
        std::size_t vertices = 0;
        for (auto [u, v] : edges) {
            vertices = std::max(vertices, v + 1);
        }
        auto nu = make_function(VertexConnectivity{WeightedGraph::unit(vertices, edges)}).tabulated();
        o.require(!find_violation(SetProperty::submodular, nu), "nu not submodular");
        nu_max = nu_max || find_violation(SetProperty::max_submodular, nu).has_value();
        ++graphs;
    }
    o.require(nu_max, "no nu max-submodular violation");
    o.detail = "SL/AL identities on " + std::to_string(instances.size()) + " instances, CL mismatch and phi-dist "
               "violations found, nu submodular on " + std::to_string(graphs) + " graphs";
    return o;
}

int run_exe(const std::string& args) {
    int s = std::system((std::string(TANGLES_EXE) + " " + args).c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

Outcome ac9() {
    Outcome o;
    auto base = fs::temp_directory_path() / ("tanglekit_acceptance_" + std::to_string(::getpid()));
    std::vector<std::vector<std::string>> outputs;
    for (int round = 0; round < 2; ++round) {
        auto dir = base / std::to_string(round);
        fs::create_directories(dir);
        auto p = [&](const char* name) { return (dir / name).string(); };
        o.require(run_exe("cluster -i " + fixtures::data_path("fig2_points.csv") + " -o " + p("d.json")) == 0, "cluster");
        o.require(run_exe("convert -i " + p("d.json") + " -o " + p("u.csv")) == 0, "convert");
        o.require(run_exe("tangles -i " + p("u.csv") + " -o " + p("t.json")) == 0, "tangles");
        o.require(run_exe("branch-width -i " + p("u.csv") + " -o " + p("bw.dot")) == 0, "branch-width");
        std::vector<std::string> files;
        for (auto name : {"d.json", "u.csv", "t.json", "bw.dot"}) {
            files.push_back(read_text_file(p(name)));
        }
        outputs.push_back(files);
    }
    fs::remove_all(base);
    o.require(outputs[0] == outputs[1], "outputs differ between runs");

    const auto& f = outputs[0];
    try {
        auto d = dendogram_from_json(parse_json(f[0], "dendogram"));
        o.require(validate_dendogram(d).ok(), "dendogram JSON invalid");
        auto raw = read_matrix_csv(f[1]);
        Ultrametric u(DistanceMatrix(raw.labels, raw.rows));
        o.require(u == psi(d), "ultrametric CSV is not psi of the dendogram");
        auto cat = parse_json(f[2], "catalog");
        o.require(cat.contains("entries") && cat["entries"].size() == 6, "catalog entries");
        for (auto& e : cat["entries"]) {
            o.require(e["core"].is_array() && e["r_lo"].is_number() && (e["r_hi"].is_number() || e["r_hi"] == "inf"),
                      "catalog entry shape");
        }
        o.require(f[3].rfind("// branch width", 0) == 0 && f[3].find("graph decomposition {") != std::string::npos &&
                      f[3].size() >= 2 && f[3].substr(f[3].size() - 2) == "}\n",
                  "DOT shape");
        o.require(oracle::dot_atoms(f[3]).size() == 7, "DOT leaves");
    } catch (const std::exception& e) {
        o.require(false, std::string("schema: ") + e.what());
    }
    o.detail = "points -> dendogram -> ultrametric -> catalog -> DOT, byte-identical twice";
    return o;
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 fig2 single linkage", ac1},       {"AC2 submodularity", ac2},
        {"AC3 duality", ac3},                   {"AC4 exactness", ac4},
        {"AC5 clusters are tangles", ac5},      {"AC6 equivalence claims", ac6},
        {"AC7 psi and minimax", ac7},           {"AC8 linkage remarks", ac8},
        {"AC9 cli end to end", ac9}};
    std::vector<double> limits{1, 60, 300, 300, 300, 300, 300, 300, 300};
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(secs < limits[i], "took " + format_number(secs) + " s");
        all = all && o.ok;
        std::cout << (o.ok ? "PASS " : "FAIL ") << criteria[i].first << ": " << o.detail << " ("
                  << std::to_string(secs).substr(0, 5) << " s)";
        for (auto& f : o.failures) {
            std::cout << " | " << f;
        }
        std::cout << std::endl;
    }
    return all ? 0 : 1;
}
