#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tanglekit/connectivity.hpp"
#include "tanglekit/subset.hpp"

namespace tanglekit {

/// Tangle of a maximum-submodular function, stored by order and core.
///
/// Membership: X is in the tangle iff f(X) < k and core is a subset of X.
struct TangleDescriptor {
    Order order;
    Subset core;
};

bool tangle_contains(const TangleDescriptor& t, const ConnectivityFunction& f, Subset x);

/// Members of the tangle in increasing bit order.
std::vector<Subset> induced_family(const TangleDescriptor& t, const ConnectivityFunction& f);

/// Cap on explicit family verification (the T.2 sweep is quadratic in the family size).
inline constexpr std::size_t kMaxVerifyTangleN = 12;

enum class TangleAxiom { t0, t1, t2, t3 };
const char* to_string(TangleAxiom axiom);

struct TangleViolation {
    TangleAxiom axiom;
    std::vector<Subset> witness;  ///< one set for T.0/T.1/T.3, three for T.2
};

struct TangleReport {
    std::size_t family_size = 0;
    std::vector<TangleViolation> violations;  ///< first witness per violated axiom
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks T.0-T.3 for an explicit family at order k.
TangleReport verify_family(const ConnectivityFunction& f, Order k, const std::vector<Subset>& family);

/// Materializes the descriptor's family and checks T.0-T.3 exhaustively.
TangleReport verify_tangle(const ConnectivityFunction& f, const TangleDescriptor& t);

/// One tangle core alive for radii r in [r_lo, r_hi), i.e. orders in (exp(-r_hi), exp(-r_lo)].
struct CatalogEntry {
    Subset core;
    double r_lo;
    double r_hi;  ///< +inf when the core is the whole universe

    friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

struct TangleCatalog {
    std::vector<CatalogEntry> entries;  ///< sorted by (r_lo, core)

    /// Entries whose interval contains radius r.
    [[nodiscard]] std::vector<CatalogEntry> alive_at(double r) const;
};

inline constexpr std::size_t kMaxEnumerateN = 24;

/// All tangles of positive order, grouped by core. Throws NotMaxSubmodularError
/// with a violating pair when f is not maximum-submodular (checked up to kMaxPairSweepN).
TangleCatalog enumerate_tangles(const ConnectivityFunction& f);

/// Largest order of a tangle: max over pairs of min_separation; zero for n <= 1.
Order tangle_number(const ConnectivityFunction& f);

}  // namespace tanglekit
