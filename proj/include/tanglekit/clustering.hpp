#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tanglekit/connectivity.hpp"
#include "tanglekit/metric_space.hpp"
#include "tanglekit/subset.hpp"
#include "tanglekit/tangle.hpp"

namespace tanglekit {

/// Right-continuous step function from radii to partitions: theta(r) = partitions[i]
/// for the largest i with radii[i] <= r.
struct Dendogram {
    std::vector<std::string> labels;
    std::vector<double> radii;
    std::vector<Partition> partitions;

    [[nodiscard]] std::size_t size() const { return labels.size(); }

    /// Same radii and same partitions.
    friend bool operator==(const Dendogram& a, const Dendogram& b) {
        return a.radii == b.radii && a.partitions == b.partitions;
    }
};

/// Merges every pair of blocks within the next linkage radius at once (chain closure).
/// Pairs within tie_eps of that radius join the same step.
Dendogram single_linkage(const DistanceMatrix& m, double tie_eps = 0.0);

/// Throws std::invalid_argument for r < 0.
Partition dendogram_evaluate(const Dendogram& d, double r);

enum class DendogramCondition {
    structure,           ///< sizes, sortedness, partition validity
    singletons_at_zero,  ///< theta(0) is all singletons
    single_block,        ///< theta(r) = {U} for large r
    refinement,          ///< theta(r) refines theta(s) for r <= s, strictly between steps
    right_continuity,    ///< holds by the step-function representation
};
const char* to_string(DendogramCondition c);

struct DendogramIssue {
    DendogramCondition condition;
    std::size_t step;
    std::string detail;
};

struct DendogramReport {
    std::vector<DendogramIssue> issues;
    [[nodiscard]] bool ok() const { return issues.empty(); }
};

DendogramReport validate_dendogram(const Dendogram& d);

/// u(x,y) = first radius at which x and y share a block. Throws on an invalid dendogram.
Ultrametric psi(const Dendogram& d);

/// theta(r) = classes of {u <= r}; radii are 0 and the distinct off-diagonal values.
Dendogram psi_inverse(const Ultrametric& u);

/// Bottleneck (minimax path) distance.
Ultrametric minimax_ultrametric(const DistanceMatrix& m);

inline constexpr std::size_t kMaxTabulateN = 20;
inline constexpr std::size_t kMaxKappaInverseN = 16;

/// mind over psi(d); tabulated up to kMaxTabulateN elements.
ConnectivityFunction kappa_from_dendogram(const Dendogram& d);

/// u(x,y) = -ln(min_separation(f,x,y)), after checking that f takes values in [0,1),
/// vanishes only on the trivial sets, and that mind over u reproduces f
/// (exactly for radius-native f, relative 1e-12 otherwise).
Ultrametric kappa_ultrametric(const ConnectivityFunction& f, const std::vector<std::string>& labels);

/// psi_inverse(kappa_ultrametric(f, labels)).
Dendogram dendogram_from_kappa(const ConnectivityFunction& f, const std::vector<std::string>& labels);

/// A nonsingleton block and the radii [r_lo, r_hi) during which it is a block.
struct BlockInterval {
    Subset block;
    double r_lo;
    double r_hi;

    friend bool operator==(const BlockInterval&, const BlockInterval&) = default;
};

/// Nonsingleton blocks of d sorted by (r_lo, block).
std::vector<BlockInterval> block_intervals(const Dendogram& d);

struct CorrespondenceReport {
    std::vector<BlockInterval> blocks;
    TangleCatalog catalog;
    bool coincide = false;
    std::vector<std::string> failures;

    [[nodiscard]] bool ok() const { return coincide && failures.empty(); }
};

/// Compares the single-linkage blocks with the tangles of mind in both directions:
/// every block passes verify_tangle at order exp(-r_lo), every catalog core is the
/// block containing it at r_lo, and the two interval lists coincide.
CorrespondenceReport block_tangle_correspondence(const DistanceMatrix& m);

enum class Linkage { single, complete, average };
const char* to_string(Linkage kind);

/// Min, max or mean of the cross distances between two disjoint nonempty sets.
double linkage_eval(Linkage kind, const DistanceMatrix& m, Subset a, Subset b);

inline constexpr std::size_t kMaxPartitionN = 10;

/// Every set partition of {0..n-1}, in restricted-growth order.
std::vector<Partition> all_partitions(std::size_t n);

/// A partition on which a linkage identity fails (or, for complete linkage, on which
/// it differs from the connectivity formulation). block is npos for the global form.
struct PartitionFinding {
    Partition partition;
    std::size_t block;
    double lhs;
    double rhs;
};

/// Single linkage: l(X, ~X) = min over other blocks Y of l(X,Y), and the minimum over
/// pairs of blocks equals -ln(max mind(X)). Checked exactly on all partitions.
std::optional<PartitionFinding> single_linkage_identity_violation(const DistanceMatrix& m);

/// First partition where the min complete-linkage distance between blocks differs
/// from -ln(max kappa_dist(X)).
std::optional<PartitionFinding> complete_linkage_mismatch(const DistanceMatrix& m);

/// Largest relative error of l_AL(X,~X) = sum |Y| l_AL(X,Y) / sum |Y| over all partitions.
double average_linkage_aggregation_error(const DistanceMatrix& m);

}  // namespace tanglekit
