#include "tanglekit/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "tanglekit/errors.hpp"
#include "tanglekit/text.hpp"

namespace tanglekit {

namespace {

using Edge = std::pair<std::size_t, std::size_t>;

}  // namespace

TernaryTree::TernaryTree(std::vector<std::string> ids, std::vector<Edge> edges)
    : ids_(std::move(ids)), adjacency_(ids_.size()) {
    const auto v = ids_.size();
    if (v < 2) {
        throw std::invalid_argument("ternary tree needs at least two vertices");
    }
    if (edges.size() != v - 1) {
        throw std::invalid_argument("ternary tree on " + std::to_string(v) + " vertices needs " +
                                    std::to_string(v - 1) + " edges, got " + std::to_string(edges.size()));
    }
    {
        auto sorted = ids_;
        std::sort(sorted.begin(), sorted.end());
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        if (dup != sorted.end()) {
            throw std::invalid_argument("duplicate vertex id '" + *dup + "'");
        }
    }
    std::vector<std::size_t> parent(v);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (auto [a, b] : edges) {
        if (a >= v || b >= v || a == b) {
            throw std::invalid_argument("bad tree edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
        }
        auto ra = find(a);
        auto rb = find(b);
        if (ra == rb) {
            throw std::invalid_argument("tree edges contain a cycle through '" + ids_[a] + "'-'" + ids_[b] + "'");
        }
        parent[ra] = rb;
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (std::size_t i = 0; i < v; ++i) {
        auto& adj = adjacency_[i];
        std::sort(adj.begin(), adj.end());
        if (adj.size() != 1 && adj.size() != 3) {
            throw std::invalid_argument("vertex '" + ids_[i] + "' has degree " + std::to_string(adj.size()) +
                                        "; expected 1 or 3");
        }
    }
}

TernaryTree TernaryTree::numbered(std::size_t vertex_count, std::vector<Edge> edges) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < vertex_count; ++i) {
        ids.push_back(std::to_string(i));
    }
    return TernaryTree{std::move(ids), std::move(edges)};
}

std::vector<std::size_t> TernaryTree::leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertex_count(); ++i) {
        if (is_leaf(i)) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<Edge> TernaryTree::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < vertex_count(); ++i) {
        for (auto j : adjacency_[i]) {
            if (i < j) {
                out.emplace_back(i, j);
            }
        }
    }
    return out;
}

std::size_t TernaryTree::index_of(const std::string& id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) {
        throw std::out_of_range("unknown vertex id '" + id + "'");
    }
    return static_cast<std::size_t>(it - ids_.begin());
}

PreDecomposition::PreDecomposition(TernaryTree tree, std::size_t universe_size)
    : tree_(std::move(tree)), n_(universe_size) {
    if (n_ > kMaxUniverse) {
        throw std::invalid_argument("universe too large");
    }
    out_.resize(tree_.vertex_count());
    for (std::size_t s = 0; s < tree_.vertex_count(); ++s) {
        for (auto t : tree_.neighbors(s)) {
            out_[s].push_back(s < t ? Subset::empty(n_) : Subset::full(n_));
        }
    }
}

std::size_t PreDecomposition::slot(std::size_t s, std::size_t t) const {
    const auto& adj = tree_.neighbors(s);
    auto it = std::lower_bound(adj.begin(), adj.end(), t);
    if (it == adj.end() || *it != t) {
        throw std::out_of_range("no tree edge " + std::to_string(s) + "->" + std::to_string(t));
    }
    return static_cast<std::size_t>(it - adj.begin());
}

Subset PreDecomposition::gamma(std::size_t s, std::size_t t) const {
    return out_[s][slot(s, t)];
}

void PreDecomposition::set_gamma(std::size_t s, std::size_t t, Subset x) {
    if (x.universe_size() != n_) {
        throw std::invalid_argument("gamma set over a different universe");
    }
    out_[s][slot(s, t)] = x;
    out_[t][slot(t, s)] = x.complement();
}

Subset PreDecomposition::atom(std::size_t leaf) const {
    if (!tree_.is_leaf(leaf)) {
        throw std::invalid_argument("vertex '" + tree_.id(leaf) + "' is not a leaf");
    }
    return gamma(tree_.neighbors(leaf).front(), leaf);
}

std::vector<std::pair<std::size_t, Subset>> PreDecomposition::atoms() const {
    std::vector<std::pair<std::size_t, Subset>> out;
    for (auto leaf : tree_.leaves()) {
        out.emplace_back(leaf, atom(leaf));
    }
    return out;
}

bool operator==(const PreDecomposition& a, const PreDecomposition& b) {
    return a.n_ == b.n_ && a.tree_.ids() == b.tree_.ids() && a.tree_.edges() == b.tree_.edges() &&
           a.out_ == b.out_;
}

DecompositionReport validate_pre_decomposition(const PreDecomposition& pd) {
    DecompositionReport report;
    const auto& tree = pd.tree();
    for (std::size_t s = 0; s < tree.vertex_count(); ++s) {
        if (tree.is_leaf(s)) {
            continue;
        }
        const auto& adj = tree.neighbors(s);
        auto y1 = pd.gamma(s, adj[0]);
        auto y2 = pd.gamma(s, adj[1]);
        auto y3 = pd.gamma(s, adj[2]);
        if (!(y1 | y2 | y3).is_full()) {
            report.valid = false;
            report.uncovered.push_back(s);
        }
        if (y1.intersects(y2) || y1.intersects(y3) || y2.intersects(y3)) {
            report.inexact.push_back(s);
        }
    }
    report.complete = true;
    for (auto [leaf, a] : pd.atoms()) {
        report.atoms.push_back(a);
        if (a.size() != 1) {
            report.complete = false;
        }
    }
    return report;
}

Order width(const PreDecomposition& pd, const ConnectivityFunction& f) {
    if (pd.universe_size() != f.universe_size()) {
        throw std::invalid_argument("pre-decomposition over " + std::to_string(pd.universe_size()) +
                                    " elements, function over " + std::to_string(f.universe_size()));
    }
    double best = f.level(Subset::empty(f.universe_size()));
    for (auto [s, t] : pd.tree().edges()) {
        best = std::max({best, f.level(pd.gamma(s, t)), f.level(pd.gamma(t, s))});
    }
    return f.order_of_level(best);
}

PreDecomposition prune_empty_leaves(const PreDecomposition& pd) {
    const auto& tree = pd.tree();
    const auto v = tree.vertex_count();
    const auto n = pd.universe_size();
    std::vector<std::vector<std::size_t>> adj(v);
    std::map<Edge, Subset> gamma;
    for (std::size_t s = 0; s < v; ++s) {
        adj[s] = tree.neighbors(s);
        for (auto t : adj[s]) {
            gamma[{s, t}] = pd.gamma(s, t);
        }
    }
    std::vector<bool> alive(v, true);
    std::size_t remaining = v;

    auto replace = [&](std::size_t at, std::size_t from, std::size_t to) {
        auto& a = adj[at];
        std::replace(a.begin(), a.end(), from, to);
        std::sort(a.begin(), a.end());
    };

    while (remaining > 2) {
        std::size_t leaf = v;
        for (std::size_t i = 0; i < v; ++i) {
            if (alive[i] && adj[i].size() == 1 && gamma.at({adj[i][0], i}).is_empty()) {
                leaf = i;
                break;
            }
        }
        if (leaf == v) {
            break;
        }
        const auto s = adj[leaf][0];
        std::vector<std::size_t> others;
        for (auto u : adj[s]) {
            if (u != leaf) {
                others.push_back(u);
            }
        }
        const auto u1 = others[0];
        const auto u2 = others[1];
        const auto g1 = gamma.at({s, u1});
        const auto g2 = gamma.at({s, u2});
        replace(u1, s, u2);
        replace(u2, s, u1);
        gamma[{u1, u2}] = g2;
        gamma[{u2, u1}] = g1;
        alive[leaf] = false;
        alive[s] = false;
        remaining -= 2;
    }
    if (remaining == v) {
        return pd;
    }

    std::vector<std::size_t> new_index(v, v);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < v; ++i) {
        if (alive[i]) {
            new_index[i] = ids.size();
            ids.push_back(tree.id(i));
        }
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < v; ++i) {
        if (!alive[i]) {
            continue;
        }
        for (auto j : adj[i]) {
            if (i < j) {
                edges.emplace_back(new_index[i], new_index[j]);
            }
        }
    }
    PreDecomposition out{TernaryTree{std::move(ids), edges}, n};
    for (std::size_t i = 0; i < v; ++i) {
        if (!alive[i]) {
            continue;
        }
        for (auto j : adj[i]) {
            if (i < j) {
                out.set_gamma(new_index[i], new_index[j], gamma.at({i, j}));
            }
        }
    }
    return out;
}

PreDecomposition exactness_transform(const PreDecomposition& pd, const ConnectivityFunction& f) {
    if (pd.universe_size() != f.universe_size()) {
        throw std::invalid_argument("pre-decomposition and function disagree on the universe size");
    }
    if (!validate_pre_decomposition(pd).valid) {
        throw std::invalid_argument("exactness_transform needs a valid pre-decomposition");
    }
    const auto& tree = pd.tree();
    const auto v = tree.vertex_count();
    PreDecomposition out = pd;

    auto check_bound = [&](Subset before, Subset other, Subset after) {
        if (f.level(after) > std::max(f.level(before), f.level(other))) {
            throw NotMaxSubmodularError("exactness update raises the width: f(" + format_subset(after) +
                                            ") exceeds max(f(" + format_subset(before) + "), f(" +
                                            format_subset(other) + "))",
                                        before, other);
        }
    };

    const auto start = tree.leaves().front();
    std::vector<std::size_t> pred(v, v);
    std::vector<bool> seen(v, false);
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
        const auto s = queue.front();
        queue.pop_front();
        std::vector<std::size_t> succ;
        for (auto u : tree.neighbors(s)) {
            if (!seen[u]) {
                seen[u] = true;
                pred[u] = s;
                queue.push_back(u);
                succ.push_back(u);
            }
        }
        if (s == start || tree.is_leaf(s)) {
            continue;
        }
        const auto x = out.gamma(s, pred[s]);
        auto y1 = out.gamma(s, succ[0]);
        auto y2 = out.gamma(s, succ[1]);
        if (x.intersects(y1 | y2)) {
            auto n1 = y1 - x;
            auto n2 = y2 - x;
            check_bound(y1, x.complement(), n1);
            check_bound(y2, x.complement(), n2);
            y1 = n1;
            y2 = n2;
        }
        if (y1.intersects(y2)) {
            auto n1 = y1 - y2;
            check_bound(y1, y2.complement(), n1);
            y1 = n1;
        }
        out.set_gamma(s, succ[0], y1);
        out.set_gamma(s, succ[1], y2);
    }
    return prune_empty_leaves(out);
}

PreDecomposition from_atoms(const TernaryTree& tree, std::size_t universe_size,
                            const std::vector<std::pair<std::size_t, Subset>>& leaf_atoms) {
    const auto v = tree.vertex_count();
    const auto n = universe_size;
    std::vector<std::optional<Subset>> atom(v);
    Subset seen = Subset::empty(n);
    for (auto [leaf, a] : leaf_atoms) {
        if (leaf >= v || !tree.is_leaf(leaf)) {
            throw std::invalid_argument("atom assigned to a non-leaf vertex");
        }
        if (a.universe_size() != n) {
            throw std::invalid_argument("atom over a different universe");
        }
        if (atom[leaf]) {
            throw std::invalid_argument("leaf '" + tree.id(leaf) + "' has two atoms");
        }
        if (seen.intersects(a)) {
            throw std::invalid_argument("atoms are not disjoint: element " +
                                        std::to_string((seen & a).lowest()) + " is repeated");
        }
        seen = seen | a;
        atom[leaf] = a;
    }
    for (auto leaf : tree.leaves()) {
        if (!atom[leaf]) {
            throw std::invalid_argument("leaf '" + tree.id(leaf) + "' has no atom");
        }
    }
    if (!seen.is_full()) {
        throw std::invalid_argument("atoms do not cover the universe: element " +
                                    std::to_string(seen.complement().lowest()) + " is missing");
    }

    // side(s,t): union of atoms of the leaves reached through t.
    std::map<Edge, Subset> memo;
    std::function<Subset(std::size_t, std::size_t)> side = [&](std::size_t s, std::size_t t) -> Subset {
        if (auto it = memo.find({s, t}); it != memo.end()) {
            return it->second;
        }
        Subset result = Subset::empty(n);
        if (tree.is_leaf(t)) {
            result = *atom[t];
        } else {
            for (auto w : tree.neighbors(t)) {
                if (w != s) {
                    result = result | side(t, w);
                }
            }
        }
        memo[{s, t}] = result;
        return result;
    };
    PreDecomposition out{tree, n};
    for (auto [s, t] : tree.edges()) {
        out.set_gamma(s, t, side(s, t));
    }
    return out;
}

std::uint64_t ternary_tree_count(std::size_t leaves) {
    std::uint64_t count = 1;
    for (std::uint64_t k = 3; leaves >= 3 && k <= 2 * leaves - 5; k += 2) {
        count *= k;
    }
    return count;
}

BranchWidth branch_width_exact(const ConnectivityFunction& f) {
    const auto n = f.universe_size();
    if (n < kMinBranchWidthN) {
        throw std::invalid_argument("branch_width_exact needs at least two elements");
    }
    enforce_cap("branch_width_exact", kMaxBranchWidthN, n);
    const auto levels = f.level_table();
    const std::size_t vertices = n == 2 ? 2 : 2 * n - 2;

    std::vector<Edge> edges;
    std::size_t next_internal = n;
    if (n == 2) {
        edges = {{0, 1}};
    } else {
        edges = {{0, n}, {1, n}, {2, n}};
        next_internal = n + 1;
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<Edge> best_edges;
    std::uint64_t count = 0;
    std::vector<std::vector<std::size_t>> adj(vertices);

    auto evaluate = [&]() {
        ++count;
        for (auto& a : adj) {
            a.clear();
        }
        for (auto [a, b] : edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        // Leaf sets below each vertex, rooted at leaf 0; every edge is (parent, child).
        std::vector<std::uint64_t> below(vertices, 0);
        std::vector<std::size_t> order;
        std::vector<std::size_t> parent(vertices, vertices);
        std::vector<std::size_t> stack{0};
        parent[0] = 0;
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            order.push_back(x);
            for (auto y : adj[x]) {
                if (parent[y] == vertices) {
                    parent[y] = x;
                    stack.push_back(y);
                }
            }
        }
        double w = -std::numeric_limits<double>::infinity();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            auto x = *it;
            if (x < n) {
                below[x] |= std::uint64_t{1} << x;
            }
            if (x != 0) {
                below[parent[x]] |= below[x];
                w = std::max(w, levels[below[x]]);
            }
        }
        if (w < best) {
            best = w;
            best_edges = edges;
        }
    };

    std::function<void(std::size_t)> extend = [&](std::size_t leaf) {
        if (leaf == n) {
            evaluate();
            return;
        }
        const auto size = edges.size();
        for (std::size_t e = 0; e < size; ++e) {
            auto [a, b] = edges[e];
            const auto w = next_internal++;
            edges[e] = {a, w};
            edges.emplace_back(w, b);
            edges.emplace_back(leaf, w);
            extend(leaf + 1);
            edges.pop_back();
            edges.pop_back();
            edges[e] = {a, b};
            --next_internal;
        }
    };
    extend(n == 2 ? 2 : 3);

    if (count != ternary_tree_count(n)) {
        throw std::logic_error("tree enumeration produced " + std::to_string(count) + " trees, expected " +
                               std::to_string(ternary_tree_count(n)));
    }

    std::vector<std::pair<std::size_t, Subset>> atoms;
    for (std::size_t i = 0; i < n; ++i) {
        atoms.emplace_back(i, Subset::singleton(n, i));
    }
    auto tree = TernaryTree::numbered(vertices, best_edges);
    return {f.order_of_level(best), from_atoms(tree, n, atoms), count};
}

SubsetFamily::SubsetFamily(std::size_t n, std::vector<Subset> generators) : n_(n) {
    for (auto g : generators) {
        if (g.universe_size() != n) {
            throw std::invalid_argument("family generator over a different universe");
        }
    }
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
    for (auto g : generators) {
        bool dominated = std::any_of(generators.begin(), generators.end(),
                                     [g](Subset h) { return h != g && g.is_subset_of(h); });
        if (!dominated) {
            maximal_.push_back(g);
        }
    }
}

SubsetFamily SubsetFamily::singletons(std::size_t n) {
    std::vector<Subset> gens;
    for (std::size_t i = 0; i < n; ++i) {
        gens.push_back(Subset::singleton(n, i));
    }
    return SubsetFamily{n, gens};
}

SubsetFamily SubsetFamily::all_subsets(std::size_t n) {
    return SubsetFamily{n, {Subset::full(n)}};
}

bool SubsetFamily::contains(Subset x) const {
    if (x.is_empty()) {
        return true;
    }
    return std::any_of(maximal_.begin(), maximal_.end(), [x](Subset m) { return x.is_subset_of(m); });
}

bool SubsetFamily::contains_singletons() const {
    Subset covered = Subset::empty(n_);
    for (auto m : maximal_) {
        covered = covered | m;
    }
    return covered.is_full();
}

SubsetFamily SubsetFamily::with_powerset_of(Subset x) const {
    auto gens = maximal_;
    gens.push_back(x);
    return SubsetFamily{n_, gens};
}

namespace {

struct TangleFamily {
    std::vector<Subset> members;
};

using Outcome = std::variant<PreDecomposition, TangleFamily>;

class DualityBuilder {
public:
    DualityBuilder(const ConnectivityFunction& f, double threshold)
        : f_(f), n_(f.universe_size()), levels_(f.level_table()) {
        for (std::uint64_t bits = 0; bits < levels_.size(); ++bits) {
            if (levels_[bits] < threshold) {
                small_.emplace_back(n_, bits);
            }
        }
        std::stable_sort(small_.begin(), small_.end(),
                         [](Subset a, Subset b) { return a.size() < b.size(); });
    }

    Outcome build(const SubsetFamily& a) {
        if (auto it = memo_.find(a.maximal_sets()); it != memo_.end()) {
            return it->second;
        }
        auto result = build_uncached(a);
        memo_.emplace(a.maximal_sets(), result);
        return result;
    }

private:
    bool atoms_within(const PreDecomposition& pd, const SubsetFamily& a) const {
        for (auto [leaf, x] : pd.atoms()) {
            if (!a.contains(x)) {
                return false;
            }
        }
        return true;
    }

    PreDecomposition star(Subset y1, Subset y2, Subset y3) const {
        auto tree = TernaryTree::numbered(4, {{0, 1}, {0, 2}, {0, 3}});
        PreDecomposition pd{tree, n_};
        pd.set_gamma(0, 1, y1.complement());
        pd.set_gamma(0, 2, y2.complement());
        pd.set_gamma(0, 3, y3.complement());
        return pd;
    }

    Outcome base_case(const SubsetFamily& a) const {
        std::vector<Subset> y;
        std::vector<std::uint8_t> member(levels_.size(), 0);
        for (auto x : small_) {
            if (a.contains(x)) {
                auto c = x.complement();
                if (member[c.bits()] == 0) {
                    member[c.bits()] = 1;
                    y.push_back(c);
                }
            }
        }
        std::sort(y.begin(), y.end());
        for (auto y1 : y) {
            for (auto y2 : y) {
                for (auto y3 : y) {
                    if ((y1 & y2 & y3).is_empty()) {
                        auto pd = star(y1, y2, y3);
                        if (!validate_pre_decomposition(pd).valid) {
                            throw std::logic_error("base-case star is not a pre-decomposition");
                        }
                        return pd;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < n_; ++i) {
            auto s = Subset::singleton(n_, i);
            if (member[s.bits()] != 0) {
                PreDecomposition pd{TernaryTree::numbered(2, {{0, 1}}), n_};
                pd.set_gamma(0, 1, s.complement());
                return pd;
            }
        }
        return TangleFamily{y};
    }

    Outcome build_uncached(const SubsetFamily& a) {
        std::optional<Subset> pick;
        for (auto x : small_) {
            if (!a.contains(x) && !a.contains(x.complement())) {
                pick = x;
                break;
            }
        }
        if (!pick) {
            return base_case(a);
        }
        const auto xp = *pick;
        auto r1 = build(a.with_powerset_of(xp));
        if (std::holds_alternative<TangleFamily>(r1)) {
            return r1;
        }
        if (atoms_within(std::get<PreDecomposition>(r1), a)) {
            return r1;
        }
        auto r2 = build(a.with_powerset_of(xp.complement()));
        if (std::holds_alternative<TangleFamily>(r2)) {
            return r2;
        }
        auto t2 = std::get<PreDecomposition>(r2);
        if (atoms_within(t2, a)) {
            return t2;
        }
        auto t1 = exactness_transform(std::get<PreDecomposition>(r1), f_);
        if (atoms_within(t1, a)) {
            return t1;
        }
        return splice(t1, t2, a, xp);
    }

    PreDecomposition splice(const PreDecomposition& t1, PreDecomposition t2, const SubsetFamily& a,
                            Subset xp) const {
        std::optional<std::size_t> bad1;
        for (auto [leaf, x] : t1.atoms()) {
            if (!a.contains(x)) {
                if (bad1 || x != xp) {
                    throw std::logic_error("exact sub-decomposition has an unexpected atom outside A");
                }
                bad1 = leaf;
            }
        }
        std::vector<std::size_t> bad2;
        for (auto [leaf, x] : t2.atoms()) {
            if (!a.contains(x)) {
                bad2.push_back(leaf);
            }
        }
        const auto& tree1 = t1.tree();
        const auto& tree2 = t2.tree();
        const auto l1 = *bad1;
        const auto s1 = tree1.neighbors(l1).front();
        if (tree1.is_leaf(s1)) {
            throw std::logic_error("cannot splice a two-vertex decomposition");
        }
        for (auto l2 : bad2) {
            auto s2 = tree2.neighbors(l2).front();
            if (tree2.is_leaf(s2)) {
                throw std::logic_error("cannot splice into a two-vertex decomposition");
            }
            t2.set_gamma(s2, l2, xp.complement());
        }

        // Vertices: T2 without its bad leaves, then one copy of T1 without l1 per bad leaf.
        const auto v1 = tree1.vertex_count();
        const auto v2 = tree2.vertex_count();
        std::vector<std::size_t> index2(v2, v2);
        std::size_t next = 0;
        for (std::size_t i = 0; i < v2; ++i) {
            if (std::find(bad2.begin(), bad2.end(), i) == bad2.end()) {
                index2[i] = next++;
            }
        }
        std::vector<std::vector<std::size_t>> index1(bad2.size(), std::vector<std::size_t>(v1, v1));
        for (auto& copy : index1) {
            for (std::size_t i = 0; i < v1; ++i) {
                if (i != l1) {
                    copy[i] = next++;
                }
            }
        }
        std::vector<Edge> edges;
        std::vector<std::pair<Edge, Subset>> gammas;
        for (auto [s, t] : tree2.edges()) {
            if (index2[s] != v2 && index2[t] != v2) {
                edges.emplace_back(index2[s], index2[t]);
                gammas.push_back({{index2[s], index2[t]}, t2.gamma(s, t)});
            }
        }
        for (std::size_t c = 0; c < bad2.size(); ++c) {
            for (auto [s, t] : tree1.edges()) {
                if (s != l1 && t != l1) {
                    edges.emplace_back(index1[c][s], index1[c][t]);
                    gammas.push_back({{index1[c][s], index1[c][t]}, t1.gamma(s, t)});
                }
            }
            const auto s2 = tree2.neighbors(bad2[c]).front();
            edges.emplace_back(index1[c][s1], index2[s2]);
            gammas.push_back({{index1[c][s1], index2[s2]}, xp});
        }
        PreDecomposition out{TernaryTree::numbered(next, edges), n_};
        for (auto [e, x] : gammas) {
            out.set_gamma(e.first, e.second, x);
        }
        if (!validate_pre_decomposition(out).valid) {
            throw std::logic_error("spliced tree is not a pre-decomposition");
        }
        return exactness_transform(out, f_);
    }

    const ConnectivityFunction& f_;
    std::size_t n_;
    std::vector<double> levels_;
    std::vector<Subset> small_;  // f(X) < k, by size then bits
    std::map<std::vector<Subset>, Outcome> memo_;
};

}  // namespace

DualityOutcome construct_decomposition_over(const ConnectivityFunction& f, const SubsetFamily& a, Order k) {
    const auto n = f.universe_size();
    enforce_cap("construct_decomposition_over", kMaxConstructN, n);
    if (a.universe_size() != n) {
        throw std::invalid_argument("family over " + std::to_string(a.universe_size()) +
                                    " elements, function over " + std::to_string(n));
    }
    if (!a.contains_singletons()) {
        throw std::invalid_argument("family must contain every singleton");
    }
    if (n < 2) {
        throw std::invalid_argument("construct_decomposition_over needs at least two elements");
    }
    const auto threshold = f.level(k);
    DualityBuilder builder(f, threshold);
    auto outcome = builder.build(a);

    if (auto* pd = std::get_if<PreDecomposition>(&outcome)) {
        auto exact = exactness_transform(*pd, f);
        for (auto [leaf, x] : exact.atoms()) {
            if (!a.contains(x)) {
                throw std::logic_error("constructed decomposition has an atom outside A");
            }
        }
        return exact;
    }

    const auto& family = std::get<TangleFamily>(outcome).members;
    Subset core = Subset::full(n);
    for (auto x : family) {
        core = core & x;
    }
    TangleDescriptor t{k, core};
    if (induced_family(t, f) != family) {
        throw NotMaxSubmodularError("tangle found by the construction is not determined by its core",
                                    core, core);
    }
    return t;
}

DualityReport verify_duality(const ConnectivityFunction& f) {
    const auto n = f.universe_size();
    if (n < kMinBranchWidthN) {
        throw std::invalid_argument("verify_duality needs at least two elements");
    }
    enforce_cap("verify_duality", kMaxBranchWidthN, n);
    DualityReport report;
    report.tangle_number = tangle_number(f);
    auto bw = branch_width_exact(f);
    report.branch_width = bw.width;
    report.witness = std::move(bw.witness);
    report.equal = f.level(report.tangle_number) == f.level(report.branch_width);
    return report;
}

}  // namespace tanglekit
