#include "tanglekit/connectivity.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "tanglekit/errors.hpp"

namespace tanglekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Union-find over element indices, path halving.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<std::size_t> parent_;
};

Partition components_of(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    DisjointSets sets(n);
    for (auto [u, v] : edges) {
        sets.unite(u, v);
    }
    std::vector<std::uint64_t> bits(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bits[sets.find(i)] |= std::uint64_t{1} << i;
    }
    std::vector<Subset> blocks;
    for (std::size_t i = 0; i < n; ++i) {
        if (bits[i] != 0) {
            blocks.emplace_back(n, bits[i]);
        }
    }
    return Partition{std::move(blocks)};
}

double cross_extreme(const DistanceMatrix& m, Subset x, bool want_max) {
    if (!x.is_proper()) {
        return kInf;
    }
    double best = want_max ? -kInf : kInf;
    auto inside = x.elements();
    auto outside = x.complement().elements();
    for (auto i : inside) {
        for (auto j : outside) {
            best = want_max ? std::max(best, m(i, j)) : std::min(best, m(i, j));
        }
    }
    return best;
}

}  // namespace

double Order::radius() const { return axis_ == Axis::radius ? x_ : -std::log(x_); }

double Order::value() const { return axis_ == Axis::value ? x_ : std::exp(-x_); }

ConnectivityFunction::ConnectivityFunction(std::size_t n, Axis axis, Evaluator native, std::string name)
    : n_{n}, axis_{axis}, native_{std::move(native)}, name_{std::move(name)} {
    if (n > kMaxUniverse) {
        throw std::length_error("connectivity function universe larger than 64 elements");
    }
}

ConnectivityFunction ConnectivityFunction::from_values(std::size_t n, Evaluator value, std::string name) {
    return ConnectivityFunction(n, Axis::value, std::move(value), std::move(name));
}

ConnectivityFunction ConnectivityFunction::from_radii(std::size_t n, Evaluator radius, std::string name) {
    return ConnectivityFunction(n, Axis::radius, std::move(radius), std::move(name));
}

void ConnectivityFunction::check(Subset x) const {
    if (x.universe_size() != n_) {
        throw std::invalid_argument("subset over universe of size " + std::to_string(x.universe_size()) +
                                    " passed to function over size " + std::to_string(n_));
    }
}

double ConnectivityFunction::value(Subset x) const {
    check(x);
    auto v = native_(x);
    return axis_ == Axis::value ? v : std::exp(-v);
}

double ConnectivityFunction::radius(Subset x) const {
    check(x);
    auto v = native_(x);
    return axis_ == Axis::radius ? v : -std::log(v);
}

double ConnectivityFunction::level(Subset x) const {
    check(x);
    auto v = native_(x);
    return axis_ == Axis::value ? v : -v;
}

double ConnectivityFunction::level(Order k) const {
    if (axis_ == Axis::value) {
        return k.value();
    }
    return -k.radius();
}

Order ConnectivityFunction::order_of_level(double level) const {
    return axis_ == Axis::value ? Order::from_value(level) : Order::from_radius(-level);
}

double ConnectivityFunction::value_of_level(double level) const {
    return axis_ == Axis::value ? level : std::exp(level);
}

double ConnectivityFunction::radius_of_level(double level) const {
    if (axis_ == Axis::radius) {
        return -level;
    }
    if (!(level > 0.0)) {
        return kInf;
    }
    auto r = -std::log(level);
    while (std::exp(-r) > level) {
        r = std::nextafter(r, kInf);
    }
    while (std::exp(-std::nextafter(r, -kInf)) <= level) {
        r = std::nextafter(r, -kInf);
    }
    return r;
}

std::vector<double> ConnectivityFunction::level_table() const {
    std::vector<double> table(subset_count(n_));
    for (std::uint64_t bits = 0; bits < table.size(); ++bits) {
        auto v = native_(Subset{n_, bits});
        table[bits] = axis_ == Axis::value ? v : -v;
    }
    return table;
}

ConnectivityFunction ConnectivityFunction::tabulated() const {
    std::vector<double> table(subset_count(n_));
    for (std::uint64_t bits = 0; bits < table.size(); ++bits) {
        table[bits] = native_(Subset{n_, bits});
    }
    auto shared = std::make_shared<const std::vector<double>>(std::move(table));
    return ConnectivityFunction(n_, axis_, [shared](Subset x) { return (*shared)[x.bits()]; }, name_);
}

WeightedGraph WeightedGraph::unit(std::size_t vertex_count,
                                  std::vector<std::pair<std::size_t, std::size_t>> edges) {
    WeightedGraph g;
    for (std::size_t v = 0; v < vertex_count; ++v) {
        g.vertex_labels.push_back("v" + std::to_string(v));
    }
    g.vertex_weights.assign(vertex_count, 1.0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        g.edge_labels.push_back("e" + std::to_string(e));
    }
    g.edges = std::move(edges);
    return g;
}

double min_cross_distance(const DistanceMatrix& m, Subset x) { return cross_extreme(m, x, false); }

double eval_mind(const DistanceMatrix& m, Subset x) {
    if (x.universe_size() != m.size()) {
        throw std::invalid_argument("subset size does not match the distance matrix");
    }
    return std::exp(-min_cross_distance(m, x));
}

ConnectivityFunction mind_function(const DistanceMatrix& m) { return make_function(MaxLinkage{m}); }

std::size_t universe_size(const BuiltinKind& kind) {
    struct Visitor {
        std::size_t operator()(const MaxLinkage& k) const { return k.metric.size(); }
        std::size_t operator()(const MinLinkage& k) const { return k.metric.size(); }
        std::size_t operator()(const AverageLinkage& k) const { return k.metric.size(); }
        std::size_t operator()(const VertexConnectivity& k) const { return k.graph.edges.size(); }
        std::size_t operator()(const TabulatedFunction& k) const { return k.n; }
    };
    return std::visit(Visitor{}, kind);
}

namespace {

double native_builtin(const BuiltinKind& kind, Subset x) {
    struct Visitor {
        Subset x;
        double operator()(const MaxLinkage& k) const { return cross_extreme(k.metric, x, false); }
        double operator()(const MinLinkage& k) const { return cross_extreme(k.metric, x, true); }
        double operator()(const AverageLinkage& k) const {
            if (!x.is_proper()) {
                return 0.0;
            }
            // Sum from the side holding element 0 so f(X) and f(~X) round identically.
            auto side = x.contains(0) ? x : x.complement();
            double sum = 0.0;
            auto outside = side.complement().elements();
            for (auto i : side.elements()) {
                for (auto j : outside) {
                    sum += std::exp(-k.metric(i, j));
                }
            }
            return sum / (static_cast<double>(side.size()) * static_cast<double>(outside.size()));
        }
        double operator()(const VertexConnectivity& k) const {
            const auto& g = k.graph;
            std::vector<std::uint8_t> touched(g.vertex_weights.size(), 0);
            for (std::size_t e = 0; e < g.edges.size(); ++e) {
                std::uint8_t side = x.contains(e) ? 1 : 2;
                touched[g.edges[e].first] |= side;
                touched[g.edges[e].second] |= side;
            }
            double sum = 0.0;
            for (std::size_t v = 0; v < touched.size(); ++v) {
                if (touched[v] == 3) {
                    sum += g.vertex_weights[v];
                }
            }
            return sum;
        }
        double operator()(const TabulatedFunction& k) const { return k.values[x.bits()]; }
    };
    return std::visit(Visitor{x}, kind);
}

Axis native_axis(const BuiltinKind& kind) {
    if (std::holds_alternative<MaxLinkage>(kind) || std::holds_alternative<MinLinkage>(kind)) {
        return Axis::radius;
    }
    if (const auto* t = std::get_if<TabulatedFunction>(&kind)) {
        return t->axis;
    }
    return Axis::value;
}

const char* builtin_name(const BuiltinKind& kind) {
    switch (kind.index()) {
        case 0: return "mind";
        case 1: return "kappa-dist";
        case 2: return "phi-dist";
        case 3: return "nu";
        default: return "tabulated";
    }
}

void validate_builtin(const BuiltinKind& kind) {
    if (const auto* nu = std::get_if<VertexConnectivity>(&kind)) {
        const auto& g = nu->graph;
        if (g.vertex_weights.size() != g.vertex_labels.size()) {
            throw std::invalid_argument("nu: vertex weight count does not match vertex count");
        }
        if (g.edge_labels.size() != g.edges.size()) {
            throw std::invalid_argument("nu: edge label count does not match edge count");
        }
        for (auto [u, v] : g.edges) {
            if (u >= g.vertex_weights.size() || v >= g.vertex_weights.size()) {
                throw std::invalid_argument("nu: edge endpoint out of range");
            }
        }
    }
    if (const auto* t = std::get_if<TabulatedFunction>(&kind)) {
        if (t->n > kMaxUniverse || t->values.size() != subset_count(t->n)) {
            throw std::invalid_argument("tabulated function: expected 2^" + std::to_string(t->n) +
                                        " values, got " + std::to_string(t->values.size()));
        }
    }
    if (universe_size(kind) > kMaxUniverse) {
        throw std::length_error("universe larger than 64 elements");
    }
}

}  // namespace

double eval_builtin(const BuiltinKind& kind, Subset x) {
    if (x.universe_size() != universe_size(kind)) {
        throw std::invalid_argument("subset size does not match the function's universe");
    }
    if (const auto* t = std::get_if<TabulatedFunction>(&kind); t && x.bits() >= t->values.size()) {
        throw std::out_of_range("tabulated lookup out of range");
    }
    auto v = native_builtin(kind, x);
    return native_axis(kind) == Axis::value ? v : std::exp(-v);
}

ConnectivityFunction make_function(BuiltinKind kind) {
    validate_builtin(kind);
    auto n = universe_size(kind);
    auto axis = native_axis(kind);
    std::string name = builtin_name(kind);
    auto shared = std::make_shared<const BuiltinKind>(std::move(kind));
    auto eval = [shared](Subset x) { return native_builtin(*shared, x); };
    return axis == Axis::value ? ConnectivityFunction::from_values(n, eval, name)
                               : ConnectivityFunction::from_radii(n, eval, name);
}

const char* to_string(Axiom axiom) {
    switch (axiom) {
        case Axiom::normalized: return "normalized";
        case Axiom::symmetric: return "symmetric";
        case Axiom::finite_nonnegative: return "finite-nonnegative";
    }
    return "unknown";
}

AxiomReport check_axioms(const ConnectivityFunction& f) {
    const auto n = f.universe_size();
    enforce_cap("check_axioms", kMaxAxiomCheckN, n);
    AxiomReport report;
    auto empty = Subset::empty(n);
    if (f.value(empty) != 0.0) {
        report.violations.push_back({Axiom::normalized, empty});
    }
    auto levels = f.level_table();
    std::optional<Subset> asymmetric;
    std::optional<Subset> bad_value;
    for (std::uint64_t bits = 0; bits < levels.size(); ++bits) {
        Subset x{n, bits};
        if (!asymmetric && levels[bits] != levels[x.complement().bits()]) {
            asymmetric = x;
        }
        auto v = f.value_of_level(levels[bits]);
        if (!bad_value && !(std::isfinite(v) && v >= 0.0)) {
            bad_value = x;
        }
    }
    if (asymmetric) {
        report.violations.push_back({Axiom::symmetric, *asymmetric});
    }
    if (bad_value) {
        report.violations.push_back({Axiom::finite_nonnegative, *bad_value});
    }
    return report;
}

const char* to_string(SetProperty p) {
    return p == SetProperty::submodular ? "submodular" : "maximum-submodular";
}

std::optional<std::pair<Subset, Subset>> find_violation(SetProperty property,
                                                        const ConnectivityFunction& f) {
    const auto n = f.universe_size();
    enforce_cap("find_violation", kMaxPairSweepN, n);
    auto table = f.level_table();
    if (property == SetProperty::submodular) {
        for (auto& t : table) {
            t = f.value_of_level(t);
        }
    }
    const auto count = table.size();
    for (std::uint64_t x = 0; x < count; ++x) {
        for (std::uint64_t y = 0; y < count; ++y) {
            const double a = table[x], b = table[y], meet = table[x & y], join = table[x | y];
            bool violated = property == SetProperty::submodular
                                ? a + b < meet + join
                                : std::max(a, b) < std::max(meet, join);
            if (violated) {
                return std::pair{Subset{n, x}, Subset{n, y}};
            }
        }
    }
    return std::nullopt;
}

void require_max_submodular(const ConnectivityFunction& f) {
    if (f.universe_size() > kMaxPairSweepN) {
        return;
    }
    if (auto pair = find_violation(SetProperty::max_submodular, f)) {
        throw NotMaxSubmodularError("function is not maximum-submodular", pair->first, pair->second);
    }
}

Separation min_separation(const ConnectivityFunction& f, std::size_t u, std::size_t v) {
    const auto n = f.universe_size();
    enforce_cap("min_separation", kMaxSeparationN, n);
    if (u >= n || v >= n) {
        throw std::out_of_range("min_separation: element outside the universe");
    }
    if (u == v) {
        throw std::invalid_argument("min_separation: u and v must differ");
    }
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != u && i != v) {
            free.push_back(i);
        }
    }
    Separation best{kInf, Subset::empty(n)};
    // Expanding the free bits in order keeps X increasing, so the first minimum wins ties.
    for (std::uint64_t s = 0; s < subset_count(free.size()); ++s) {
        std::uint64_t bits = std::uint64_t{1} << u;
        for (std::size_t b = 0; b < free.size(); ++b) {
            if ((s >> b) & 1U) {
                bits |= std::uint64_t{1} << free[b];
            }
        }
        Subset x{n, bits};
        auto l = f.level(x);
        if (l < best.level) {
            best = {l, x};
        }
    }
    return best;
}

SeparationTable::SeparationTable(const ConnectivityFunction& f) : n_{f.universe_size()} {
    enforce_cap("separation table", kMaxSeparationN, n_);
    levels_.assign(n_ * n_, kInf);
    for (std::uint64_t bits = 1; bits + 1 < subset_count(n_); ++bits) {
        Subset x{n_, bits};
        auto l = f.level(x);
        auto inside = x.elements();
        auto outside = x.complement().elements();
        for (auto a : inside) {
            for (auto b : outside) {
                auto& cell = levels_[a * n_ + b];
                cell = std::min(cell, l);
            }
        }
    }
}

ThresholdGraph threshold_graph(const SeparationTable& separations, double level) {
    ThresholdGraph g;
    g.n = separations.size();
    for (std::size_t u = 0; u < g.n; ++u) {
        for (std::size_t v = u + 1; v < g.n; ++v) {
            if (separations.level(u, v) >= level) {
                g.edges.emplace_back(u, v);
            }
        }
    }
    g.components = components_of(g.n, g.edges);
    return g;
}

ThresholdGraph threshold_graph(const ConnectivityFunction& f, Order k) {
    return threshold_graph(SeparationTable(f), f.level(k));
}

Partition canonical_zero_partition(const ConnectivityFunction& f) {
    const auto n = f.universe_size();
    enforce_cap("canonical_zero_partition", kMaxAxiomCheckN, n);
    if (n == 0) {
        return {};
    }
    std::vector<std::uint64_t> atom(n, Subset::window(n));
    for (std::uint64_t bits = 1; bits < subset_count(n); ++bits) {
        Subset x{n, bits};
        if (f.value(x) != 0.0) {
            continue;
        }
        for (auto i : x.elements()) {
            atom[i] &= bits;
        }
    }
    std::vector<Subset> blocks;
    std::uint64_t covered = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if ((covered >> i) & 1U) {
            continue;
        }
        auto block = atom[i] & ~covered;
        covered |= block;
        blocks.emplace_back(n, block);
    }
    return Partition{std::move(blocks)};
}

}  // namespace tanglekit
