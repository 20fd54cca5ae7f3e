#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tanglekit/connectivity.hpp"
#include "tanglekit/subset.hpp"
#include "tanglekit/tangle.hpp"

namespace tanglekit {

/// Tree whose vertices all have degree 1 (leaves) or 3 (internal nodes).
class TernaryTree {
public:
    TernaryTree() = default;

    /// Throws std::invalid_argument unless the edges form a tree on at least two
    /// vertices with every degree in {1, 3}.
    TernaryTree(std::vector<std::string> ids, std::vector<std::pair<std::size_t, std::size_t>> edges);

    /// Vertices named "0", "1", ...
    static TernaryTree numbered(std::size_t vertex_count,
                                std::vector<std::pair<std::size_t, std::size_t>> edges);

    [[nodiscard]] std::size_t vertex_count() const { return ids_.size(); }
    [[nodiscard]] const std::string& id(std::size_t v) const { return ids_.at(v); }
    [[nodiscard]] const std::vector<std::string>& ids() const { return ids_; }
    /// Neighbors in increasing index order.
    [[nodiscard]] const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }
    [[nodiscard]] bool is_leaf(std::size_t v) const { return adjacency_.at(v).size() == 1; }
    [[nodiscard]] std::vector<std::size_t> leaves() const;
    /// Undirected edges as (u, v) with u < v, sorted.
    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    [[nodiscard]] std::size_t index_of(const std::string& id) const;

private:
    std::vector<std::string> ids_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

/// Ternary tree with a subset on every directed edge; gamma(t,u) is always the
/// complement of gamma(u,t). The covering condition at internal nodes is checked
/// by validate_pre_decomposition, not enforced on construction.
class PreDecomposition {
public:
    PreDecomposition() = default;
    /// All edges start as gamma(s,t) = {} for s < t.
    PreDecomposition(TernaryTree tree, std::size_t universe_size);

    [[nodiscard]] const TernaryTree& tree() const { return tree_; }
    [[nodiscard]] std::size_t universe_size() const { return n_; }

    [[nodiscard]] Subset gamma(std::size_t s, std::size_t t) const;
    /// Sets gamma(s,t) = x and gamma(t,s) = complement of x.
    void set_gamma(std::size_t s, std::size_t t, Subset x);

    /// gamma(neighbor, leaf).
    [[nodiscard]] Subset atom(std::size_t leaf) const;
    /// (leaf, atom) pairs in leaf index order.
    [[nodiscard]] std::vector<std::pair<std::size_t, Subset>> atoms() const;

    friend bool operator==(const PreDecomposition&, const PreDecomposition&);

private:
    [[nodiscard]] std::size_t slot(std::size_t s, std::size_t t) const;

    TernaryTree tree_;
    std::size_t n_ = 0;
    std::vector<std::vector<Subset>> out_;  // out_[s][i] = gamma(s, neighbors(s)[i])
};

struct DecompositionReport {
    bool valid = true;                    ///< covering condition holds at every internal node
    std::vector<std::size_t> uncovered;   ///< internal nodes where the covering condition fails
    std::vector<std::size_t> inexact;     ///< internal nodes whose outgoing sets overlap
    bool complete = false;                ///< every atom is a singleton
    std::vector<Subset> atoms;            ///< in leaf index order

    [[nodiscard]] bool exact() const { return inexact.empty(); }
    [[nodiscard]] bool is_decomposition() const { return valid && exact(); }
    [[nodiscard]] bool is_branch_decomposition() const { return is_decomposition() && complete; }
};

DecompositionReport validate_pre_decomposition(const PreDecomposition& pd);

/// Largest function value over all directed edge sets.
Order width(const PreDecomposition& pd, const ConnectivityFunction& f);

/// Makes every internal node exact without increasing the width, shrinking atoms only.
/// Breadth-first from the lowest-index leaf, visiting neighbors in index order;
/// leaves left with empty atoms are pruned afterwards (vertex ids are kept).
/// Throws NotMaxSubmodularError if an update would raise the width.
PreDecomposition exactness_transform(const PreDecomposition& pd, const ConnectivityFunction& f);

/// Removes leaves with empty atoms together with their internal neighbor.
PreDecomposition prune_empty_leaves(const PreDecomposition& pd);

/// Builds gamma(s,t) as the union of the atoms of all leaves on t's side.
/// Throws std::invalid_argument unless the atoms are pairwise disjoint and cover U.
PreDecomposition from_atoms(const TernaryTree& tree, std::size_t universe_size,
                            const std::vector<std::pair<std::size_t, Subset>>& leaf_atoms);

inline constexpr std::size_t kMinBranchWidthN = 2;
inline constexpr std::size_t kMaxBranchWidthN = 8;

struct BranchWidth {
    Order width = Order::from_value(0.0);
    PreDecomposition witness;
    std::uint64_t trees_enumerated = 0;
};

/// Number of unrooted leaf-labelled ternary trees with n leaves, (2n-5)!!.
std::uint64_t ternary_tree_count(std::size_t leaves);

/// Exhaustive minimum over all leaf-labelled ternary trees; ties keep the first
/// tree in insertion order.
BranchWidth branch_width_exact(const ConnectivityFunction& f);

/// Down-closed family of subsets, stored by its maximal sets.
class SubsetFamily {
public:
    SubsetFamily(std::size_t n, std::vector<Subset> generators);

    static SubsetFamily singletons(std::size_t n);
    static SubsetFamily all_subsets(std::size_t n);

    [[nodiscard]] std::size_t universe_size() const { return n_; }
    [[nodiscard]] const std::vector<Subset>& maximal_sets() const { return maximal_; }
    [[nodiscard]] bool contains(Subset x) const;
    [[nodiscard]] bool contains_singletons() const;
    [[nodiscard]] SubsetFamily with_powerset_of(Subset x) const;

    friend bool operator==(const SubsetFamily&, const SubsetFamily&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Subset> maximal_;  // sorted
};

inline constexpr std::size_t kMaxConstructN = 12;

/// Either a decomposition over A of width < k, or a tangle of order k avoiding A.
using DualityOutcome = std::variant<PreDecomposition, TangleDescriptor>;

/// Constructive duality: induction on the sets X with f(X) < k and neither X nor
/// its complement in A, splicing sub-decompositions over the minimal such X.
DualityOutcome construct_decomposition_over(const ConnectivityFunction& f, const SubsetFamily& a, Order k);

struct DualityReport {
    Order tangle_number = Order::from_value(0.0);
    Order branch_width = Order::from_value(0.0);
    bool equal = false;
    PreDecomposition witness;
};

/// Computes the tangle number and the exact branch width independently.
DualityReport verify_duality(const ConnectivityFunction& f);

}  // namespace tanglekit
