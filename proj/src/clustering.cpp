#include "tanglekit/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tanglekit/errors.hpp"
#include "tanglekit/text.hpp"

namespace tanglekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

    Partition partition() {
        const auto n = parent_.size();
        std::vector<std::uint64_t> bits(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            bits[find(i)] |= std::uint64_t{1} << i;
        }
        std::vector<Subset> blocks;
        for (auto b : bits) {
            if (b != 0) {
                blocks.emplace_back(n, b);
            }
        }
        return Partition{std::move(blocks)};
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

Dendogram single_linkage(const DistanceMatrix& m, double tie_eps) {
    const auto n = m.size();
    if (n == 0) {
        throw std::invalid_argument("single_linkage needs at least one point");
    }
    if (n > kMaxUniverse) {
        throw SizeCapError("single_linkage", kMaxUniverse, n);
    }
    if (!(tie_eps >= 0.0)) {
        throw std::invalid_argument("tie tolerance must be nonnegative");
    }
    Dendogram d;
    d.labels = m.labels();
    UnionFind uf(n);
    d.radii.push_back(0.0);
    d.partitions.push_back(uf.partition());
    std::size_t blocks = n;
    while (blocks > 1) {
        double r = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (uf.find(i) != uf.find(j)) {
                    r = std::min(r, m(i, j));
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (m(i, j) <= r + tie_eps && uf.unite(i, j)) {
                    --blocks;
                }
            }
        }
        d.radii.push_back(r);
        d.partitions.push_back(uf.partition());
    }
    return d;
}

Partition dendogram_evaluate(const Dendogram& d, double r) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("dendogram evaluated at negative radius");
    }
    if (d.radii.empty()) {
        throw std::invalid_argument("empty dendogram");
    }
    auto it = std::upper_bound(d.radii.begin(), d.radii.end(), r);
    return d.partitions.at(static_cast<std::size_t>(it - d.radii.begin()) - 1);
}

const char* to_string(DendogramCondition c) {
    switch (c) {
        case DendogramCondition::structure: return "structure";
        case DendogramCondition::singletons_at_zero: return "singletons at zero";
        case DendogramCondition::single_block: return "single block";
        case DendogramCondition::refinement: return "refinement";
        case DendogramCondition::right_continuity: return "right continuity";
    }
    return "?";
}

DendogramReport validate_dendogram(const Dendogram& d) {
    DendogramReport report;
    const auto n = d.size();
    auto issue = [&](DendogramCondition c, std::size_t step, std::string detail) {
        report.issues.push_back({c, step, std::move(detail)});
    };
    if (d.radii.empty() || d.radii.size() != d.partitions.size()) {
        issue(DendogramCondition::structure, 0, "radii and partitions must be nonempty and of equal length");
        return report;
    }
    for (std::size_t i = 0; i < d.partitions.size(); ++i) {
        if (!d.partitions[i].is_valid(n)) {
            issue(DendogramCondition::structure, i, "step " + std::to_string(i) + " is not a partition");
            return report;
        }
        if (!std::isfinite(d.radii[i])) {
            issue(DendogramCondition::structure, i, "radius at step " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(d.radii[i - 1] < d.radii[i])) {
            issue(DendogramCondition::structure, i, "radii not strictly increasing at step " + std::to_string(i));
        }
    }
    if (d.radii.front() != 0.0) {
        issue(DendogramCondition::singletons_at_zero, 0, "first radius must be 0");
    }
    if (!(d.partitions.front() == Partition::singletons(n))) {
        issue(DendogramCondition::singletons_at_zero, 0, "theta(0) is not all singletons");
    }
    if (d.partitions.back().blocks.size() != 1) {
        issue(DendogramCondition::single_block, d.partitions.size() - 1,
              "last step has " + std::to_string(d.partitions.back().blocks.size()) + " blocks");
    }
    for (std::size_t i = 1; i < d.partitions.size(); ++i) {
        const auto& prev = d.partitions[i - 1];
        const auto& next = d.partitions[i];
        if (!prev.refines(next)) {
            issue(DendogramCondition::refinement, i,
                  "step " + std::to_string(i - 1) + " does not refine step " + std::to_string(i));
        } else if (prev == next) {
            issue(DendogramCondition::refinement, i,
                  "steps " + std::to_string(i - 1) + " and " + std::to_string(i) + " are equal");
        }
    }
    return report;
}

Ultrametric psi(const Dendogram& d) {
    auto report = validate_dendogram(d);
    if (!report.ok()) {
        const auto& first = report.issues.front();
        throw std::invalid_argument(std::string("invalid dendogram (") + to_string(first.condition) +
                                    "): " + first.detail);
    }
    const auto n = d.size();
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            for (std::size_t i = 0; i < d.partitions.size(); ++i) {
                if (d.partitions[i].block_of(x).contains(y)) {
                    rows[x][y] = rows[y][x] = d.radii[i];
                    break;
                }
            }
        }
    }
    return Ultrametric{DistanceMatrix{d.labels, rows}};
}

Dendogram psi_inverse(const Ultrametric& u) {
    const auto n = u.size();
    if (n == 0) {
        throw std::invalid_argument("empty ultrametric");
    }
    std::vector<double> values;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            values.push_back(u(x, y));
        }
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    Dendogram d;
    d.labels = u.labels();
    UnionFind uf(n);
    d.radii.push_back(0.0);
    d.partitions.push_back(uf.partition());
    for (auto r : values) {
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = x + 1; y < n; ++y) {
                if (u(x, y) <= r) {
                    uf.unite(x, y);
                }
            }
        }
        d.radii.push_back(r);
        d.partitions.push_back(uf.partition());
    }
    return d;
}

Ultrametric minimax_ultrametric(const DistanceMatrix& m) {
    const auto n = m.size();
    auto rows = m.rows();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                rows[i][j] = std::min(rows[i][j], std::max(rows[i][k], rows[k][j]));
            }
        }
    }
    return Ultrametric{DistanceMatrix{m.labels(), rows}};
}

ConnectivityFunction kappa_from_dendogram(const Dendogram& d) {
    auto f = make_function(MaxLinkage{psi(d).matrix()});
    return d.size() <= kMaxTabulateN ? f.tabulated() : f;
}

Ultrametric kappa_ultrametric(const ConnectivityFunction& f, const std::vector<std::string>& labels) {
    const auto n = f.universe_size();
    enforce_cap("dendogram_from_kappa", kMaxKappaInverseN, n);
    if (labels.size() != n) {
        throw std::invalid_argument("expected " + std::to_string(n) + " labels, got " +
                                    std::to_string(labels.size()));
    }
    if (n == 0) {
        throw std::invalid_argument("empty universe");
    }
    for (std::uint64_t bits = 0; bits < subset_count(n); ++bits) {
        Subset x{n, bits};
        const auto v = f.value(x);
        if (!(v >= 0.0 && v < 1.0)) {
            throw std::invalid_argument("f must take values in [0,1); f(" + format_subset(x, labels) +
                                        ") = " + format_number(v));
        }
        if (x.is_proper() && !(v > 0.0)) {
            throw std::invalid_argument("f must be positive on proper nonempty subsets; f(" +
                                        format_subset(x, labels) + ") = 0");
        }
        if (!x.is_proper() && v != 0.0) {
            throw std::invalid_argument("f must vanish on the empty set and the universe");
        }
    }
    require_max_submodular(f);

    SeparationTable separations(f);
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            rows[x][y] = rows[y][x] = f.order_of_level(separations.level(x, y)).radius();
        }
    }
    DistanceMatrix m{labels, rows};
    if (auto t = ultrametric_check(m)) {
        throw NotMaxSubmodularError("separation distances are not ultrametric at (" + labels[(*t)[0]] + "," +
                                        labels[(*t)[1]] + "," + labels[(*t)[2]] + ")",
                                    Subset::singleton(n, (*t)[0]), Subset::singleton(n, (*t)[2]));
    }
    auto mind = make_function(MaxLinkage{m});
    for (std::uint64_t bits = 0; bits < subset_count(n); ++bits) {
        Subset x{n, bits};
        bool same = false;
        if (f.axis() == Axis::radius) {
            same = mind.radius(x) == f.radius(x);
        } else {
            const auto a = mind.value(x);
            const auto b = f.value(x);
            same = std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
        }
        if (!same) {
            throw NotMaxSubmodularError("mind over the separation ultrametric differs from f at " +
                                            format_subset(x, labels),
                                        x, x);
        }
    }
    return Ultrametric{std::move(m)};
}

Dendogram dendogram_from_kappa(const ConnectivityFunction& f, const std::vector<std::string>& labels) {
    return psi_inverse(kappa_ultrametric(f, labels));
}

std::vector<BlockInterval> block_intervals(const Dendogram& d) {
    std::vector<BlockInterval> out;
    const auto steps = d.partitions.size();
    for (std::size_t i = 0; i < steps; ++i) {
        for (auto b : d.partitions[i].blocks) {
            if (b.size() < 2) {
                continue;
            }
            const auto& prev = d.partitions[i == 0 ? 0 : i - 1].blocks;
            if (i > 0 && std::find(prev.begin(), prev.end(), b) != prev.end()) {
                continue;
            }
            double hi = kInf;
            for (std::size_t j = i + 1; j < steps; ++j) {
                const auto& later = d.partitions[j].blocks;
                if (std::find(later.begin(), later.end(), b) == later.end()) {
                    hi = d.radii[j];
                    break;
                }
            }
            out.push_back({b, d.radii[i], hi});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.r_lo != b.r_lo ? a.r_lo < b.r_lo : a.block < b.block;
    });
    return out;
}

CorrespondenceReport block_tangle_correspondence(const DistanceMatrix& m) {
    const auto n = m.size();
    enforce_cap("block_tangle_correspondence", kMaxVerifyTangleN, n);
    CorrespondenceReport report;
    auto d = single_linkage(m);
    auto f = mind_function(m);
    report.blocks = block_intervals(d);
    report.catalog = enumerate_tangles(f);

    for (const auto& b : report.blocks) {
        TangleDescriptor t{Order::from_radius(b.r_lo), b.block};
        if (!verify_tangle(f, t).ok()) {
            report.failures.push_back("block " + format_subset(b.block, m.labels()) + " at r=" +
                                      format_number(b.r_lo) + " is not a tangle core");
        }
    }
    for (const auto& e : report.catalog.entries) {
        auto block = dendogram_evaluate(d, e.r_lo).block_of(e.core.lowest());
        if (!e.core.is_subset_of(block)) {
            report.failures.push_back("core " + format_subset(e.core, m.labels()) +
                                      " is not inside a block at r=" + format_number(e.r_lo));
            continue;
        }
        const auto order = Order::from_radius(e.r_lo);
        if (induced_family({order, e.core}, f) != induced_family({order, block}, f)) {
            report.failures.push_back("core " + format_subset(e.core, m.labels()) + " and block " +
                                      format_subset(block, m.labels()) + " induce different families");
        }
    }
    report.coincide = report.blocks.size() == report.catalog.entries.size() &&
                      std::equal(report.blocks.begin(), report.blocks.end(), report.catalog.entries.begin(),
                                 [](const BlockInterval& b, const CatalogEntry& e) {
                                     return b.block == e.core && b.r_lo == e.r_lo && b.r_hi == e.r_hi;
                                 });
    return report;
}

const char* to_string(Linkage kind) {
    switch (kind) {
        case Linkage::single: return "single";
        case Linkage::complete: return "complete";
        case Linkage::average: return "average";
    }
    return "?";
}

double linkage_eval(Linkage kind, const DistanceMatrix& m, Subset a, Subset b) {
    if (a.universe_size() != m.size() || b.universe_size() != m.size()) {
        throw std::invalid_argument("linkage arguments over a different universe");
    }
    if (a.is_empty() || b.is_empty()) {
        throw std::invalid_argument("linkage of an empty set");
    }
    if (a.intersects(b)) {
        throw std::invalid_argument("linkage arguments overlap");
    }
    double lo = kInf;
    double hi = -kInf;
    double sum = 0.0;
    for (auto i : a.elements()) {
        for (auto j : b.elements()) {
            lo = std::min(lo, m(i, j));
            hi = std::max(hi, m(i, j));
            sum += m(i, j);
        }
    }
    switch (kind) {
        case Linkage::single: return lo;
        case Linkage::complete: return hi;
        case Linkage::average: return sum / static_cast<double>(a.size() * b.size());
    }
    return lo;
}

std::vector<Partition> all_partitions(std::size_t n) {
    enforce_cap("all_partitions", kMaxPartitionN, n);
    std::vector<Partition> out;
    if (n == 0) {
        return out;
    }
    std::vector<std::size_t> label(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
        if (i == n) {
            std::vector<std::uint64_t> bits(used, 0);
            for (std::size_t k = 0; k < n; ++k) {
                bits[label[k]] |= std::uint64_t{1} << k;
            }
            std::vector<Subset> blocks;
            for (auto b : bits) {
                blocks.emplace_back(n, b);
            }
            out.emplace_back(std::move(blocks));
            return;
        }
        for (std::size_t c = 0; c <= used; ++c) {
            label[i] = c;
            rec(i + 1, std::max(used, c + 1));
        }
    };
    label[0] = 0;
    rec(1, 1);
    return out;
}

std::optional<PartitionFinding> single_linkage_identity_violation(const DistanceMatrix& m) {
    const auto n = m.size();
    auto f = mind_function(m);
    for (auto& p : all_partitions(n)) {
        const auto& blocks = p.blocks;
        if (blocks.size() < 2) {
            continue;
        }
        double pair_min = kInf;
        double cut_min = kInf;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            double best = kInf;
            for (std::size_t j = 0; j < blocks.size(); ++j) {
                if (j != i) {
                    best = std::min(best, linkage_eval(Linkage::single, m, blocks[i], blocks[j]));
                }
            }
            const auto whole = linkage_eval(Linkage::single, m, blocks[i], blocks[i].complement());
            if (whole != best) {
                return PartitionFinding{p, i, whole, best};
            }
            pair_min = std::min(pair_min, best);
            cut_min = std::min(cut_min, f.radius(blocks[i]));
        }
        if (pair_min != cut_min) {
            return PartitionFinding{p, std::string::npos, pair_min, cut_min};
        }
    }
    return std::nullopt;
}

std::optional<PartitionFinding> complete_linkage_mismatch(const DistanceMatrix& m) {
    const auto n = m.size();
    auto f = make_function(MinLinkage{m});
    for (auto& p : all_partitions(n)) {
        const auto& blocks = p.blocks;
        if (blocks.size() < 2) {
            continue;
        }
        double pair_min = kInf;
        double cut_min = kInf;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            for (std::size_t j = i + 1; j < blocks.size(); ++j) {
                pair_min = std::min(pair_min, linkage_eval(Linkage::complete, m, blocks[i], blocks[j]));
            }
            cut_min = std::min(cut_min, f.radius(blocks[i]));
        }
        if (pair_min != cut_min) {
            return PartitionFinding{p, std::string::npos, pair_min, cut_min};
        }
    }
    return std::nullopt;
}

double average_linkage_aggregation_error(const DistanceMatrix& m) {
    const auto n = m.size();
    double worst = 0.0;
    for (auto& p : all_partitions(n)) {
        const auto& blocks = p.blocks;
        if (blocks.size() < 2) {
            continue;
        }
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            double num = 0.0;
            double den = 0.0;
            for (std::size_t j = 0; j < blocks.size(); ++j) {
                if (j != i) {
                    const auto w = static_cast<double>(blocks[j].size());
                    num += w * linkage_eval(Linkage::average, m, blocks[i], blocks[j]);
                    den += w;
                }
            }
            const auto whole = linkage_eval(Linkage::average, m, blocks[i], blocks[i].complement());
            worst = std::max(worst, std::abs(whole - num / den) / std::abs(whole));
        }
    }
    return worst;
}

}  // namespace tanglekit
