#include "tanglekit/tangle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tanglekit/errors.hpp"

namespace tanglekit {

namespace {

// down[m] is true iff some member of the family is a subset of m.
std::vector<std::uint8_t> subset_closure(std::size_t n, const std::vector<std::uint8_t>& member) {
    auto down = member;
    for (std::size_t b = 0; b < n; ++b) {
        const std::uint64_t bit = std::uint64_t{1} << b;
        for (std::uint64_t m = 0; m < down.size(); ++m) {
            if ((m & bit) != 0 && down[m ^ bit] != 0) {
                down[m] = 1;
            }
        }
    }
    return down;
}

}  // namespace

bool tangle_contains(const TangleDescriptor& t, const ConnectivityFunction& f, Subset x) {
    return f.level(x) < f.level(t.order) && t.core.is_subset_of(x);
}

std::vector<Subset> induced_family(const TangleDescriptor& t, const ConnectivityFunction& f) {
    const auto n = f.universe_size();
    enforce_cap("induced_family", kMaxVerifyTangleN, n);
    std::vector<Subset> family;
    for (std::uint64_t bits = 0; bits < subset_count(n); ++bits) {
        Subset x{n, bits};
        if (tangle_contains(t, f, x)) {
            family.push_back(x);
        }
    }
    return family;
}

const char* to_string(TangleAxiom axiom) {
    switch (axiom) {
        case TangleAxiom::t0: return "T.0";
        case TangleAxiom::t1: return "T.1";
        case TangleAxiom::t2: return "T.2";
        case TangleAxiom::t3: return "T.3";
    }
    return "T.?";
}

TangleReport verify_family(const ConnectivityFunction& f, Order k, const std::vector<Subset>& family) {
    const auto n = f.universe_size();
    enforce_cap("verify_tangle", kMaxVerifyTangleN, n);
    const auto threshold = f.level(k);
    auto levels = f.level_table();

    TangleReport report;
    std::vector<std::uint8_t> member(levels.size(), 0);
    std::vector<Subset> sorted;
    for (auto x : family) {
        if (x.universe_size() != n) {
            throw std::invalid_argument("family member over a different universe");
        }
        if (member[x.bits()] == 0) {
            member[x.bits()] = 1;
            sorted.push_back(x);
        }
    }
    std::sort(sorted.begin(), sorted.end());
    report.family_size = sorted.size();

    for (auto x : sorted) {
        if (!(levels[x.bits()] < threshold)) {
            report.violations.push_back({TangleAxiom::t0, {x}});
            break;
        }
    }

    for (std::uint64_t bits = 0; bits < levels.size(); ++bits) {
        if (levels[bits] < threshold && member[bits] == 0 && member[Subset{n, bits}.complement().bits()] == 0) {
            report.violations.push_back({TangleAxiom::t1, {Subset{n, bits}}});
            break;
        }
    }

    // T.2: a pair (X1, X2) fails iff some member avoids X1 & X2 entirely.
    auto down = subset_closure(n, member);
    bool found = false;
    for (auto x1 : sorted) {
        for (auto x2 : sorted) {
            auto meet = x1 & x2;
            if (down[meet.complement().bits()] == 0) {
                continue;
            }
            for (auto x3 : sorted) {
                if (!x3.intersects(meet)) {
                    report.violations.push_back({TangleAxiom::t2, {x1, x2, x3}});
                    found = true;
                    break;
                }
            }
            if (found) {
                break;
            }
        }
        if (found) {
            break;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        auto s = Subset::singleton(n, i);
        if (member[s.bits()] != 0) {
            report.violations.push_back({TangleAxiom::t3, {s}});
            break;
        }
    }
    return report;
}

TangleReport verify_tangle(const ConnectivityFunction& f, const TangleDescriptor& t) {
    if (t.core.universe_size() != f.universe_size()) {
        throw std::invalid_argument("tangle core over a different universe");
    }
    return verify_family(f, t.order, induced_family(t, f));
}

std::vector<CatalogEntry> TangleCatalog::alive_at(double r) const {
    std::vector<CatalogEntry> out;
    std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
                 [r](const CatalogEntry& e) { return e.r_lo <= r && r < e.r_hi; });
    return out;
}

TangleCatalog enumerate_tangles(const ConnectivityFunction& f) {
    const auto n = f.universe_size();
    enforce_cap("enumerate_tangles", kMaxEnumerateN, n);
    require_max_submodular(f);

    TangleCatalog catalog;
    if (n < 2) {
        return catalog;
    }
    SeparationTable separations(f);
    std::vector<double> critical;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            auto l = separations.level(u, v);
            if (f.value_of_level(l) > 0.0) {
                critical.push_back(l);
            }
        }
    }
    std::sort(critical.begin(), critical.end(), std::greater<>());
    critical.erase(std::unique(critical.begin(), critical.end()), critical.end());

    // Components only change at critical levels; walk them from the strongest down.
    std::map<std::uint64_t, double> alive;  // core bits -> birth radius
    for (auto level : critical) {
        const auto r = f.radius_of_level(level);
        auto graph = threshold_graph(separations, level);
        std::map<std::uint64_t, double> next;
        for (auto c : graph.components.blocks) {
            if (c.size() < 2) {
                continue;
            }
            auto it = alive.find(c.bits());
            next[c.bits()] = it != alive.end() ? it->second : r;
        }
        for (auto [bits, birth] : alive) {
            if (!next.contains(bits)) {
                catalog.entries.push_back({Subset{n, bits}, birth, r});
            }
        }
        alive = std::move(next);
    }
    for (auto [bits, birth] : alive) {
        catalog.entries.push_back({Subset{n, bits}, birth, std::numeric_limits<double>::infinity()});
    }
    std::sort(catalog.entries.begin(), catalog.entries.end(), [](const auto& a, const auto& b) {
        return a.r_lo != b.r_lo ? a.r_lo < b.r_lo : a.core < b.core;
    });
    return catalog;
}

Order tangle_number(const ConnectivityFunction& f) {
    const auto n = f.universe_size();
    enforce_cap("tangle_number", kMaxEnumerateN, n);
    require_max_submodular(f);
    if (n < 2) {
        return Order::from_value(0.0);
    }
    SeparationTable separations(f);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            best = std::max(best, separations.level(u, v));
        }
    }
    return f.order_of_level(best);
}

}  // namespace tanglekit
