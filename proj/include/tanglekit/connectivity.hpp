#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tanglekit/metric_space.hpp"
#include "tanglekit/subset.hpp"

namespace tanglekit {

/// Native encoding of a connectivity function's values.
///
/// `value` functions are evaluated on the order axis k directly. `radius`
/// functions are evaluated on the distance axis r, with k = exp(-r).
enum class Axis { value, radius };

/// A threshold on the order axis, remembered in the encoding it was given in.
class Order {
public:
    static Order from_radius(double r) { return Order{Axis::radius, r}; }
    static Order from_value(double k) { return Order{Axis::value, k}; }

    [[nodiscard]] Axis axis() const { return axis_; }
    [[nodiscard]] double native() const { return x_; }
    [[nodiscard]] double radius() const;
    [[nodiscard]] double value() const;

private:
    Order(Axis axis, double x) : axis_{axis}, x_{x} {}
    Axis axis_;
    double x_;
};

/// Normalized symmetric set function on 2^U, |U| <= 64.
///
/// Algorithms compare `level`s: a strictly increasing re-encoding of the value
/// that is exact on the native axis (level = value, or level = -radius).
class ConnectivityFunction {
public:
    using Evaluator = std::function<double(Subset)>;

    static ConnectivityFunction from_values(std::size_t n, Evaluator value, std::string name = {});
    static ConnectivityFunction from_radii(std::size_t n, Evaluator radius, std::string name = {});

    [[nodiscard]] std::size_t universe_size() const { return n_; }
    [[nodiscard]] Axis axis() const { return axis_; }
    [[nodiscard]] const std::string& name() const { return name_; }

    [[nodiscard]] double value(Subset x) const;
    [[nodiscard]] double radius(Subset x) const;
    [[nodiscard]] double level(Subset x) const;
    [[nodiscard]] double operator()(Subset x) const { return value(x); }

    [[nodiscard]] double level(Order k) const;
    [[nodiscard]] Order order_of_level(double level) const;
    [[nodiscard]] double value_of_level(double level) const;
    /// Smallest radius r whose order exp(-r) does not exceed the level.
    [[nodiscard]] double radius_of_level(double level) const;

    /// Levels of all 2^n subsets, indexed by bit pattern.
    [[nodiscard]] std::vector<double> level_table() const;
    /// Same function backed by a materialized table of native values.
    [[nodiscard]] ConnectivityFunction tabulated() const;

private:
    ConnectivityFunction(std::size_t n, Axis axis, Evaluator native, std::string name);
    void check(Subset x) const;

    std::size_t n_ = 0;
    Axis axis_ = Axis::value;
    Evaluator native_;
    std::string name_;
};

/// Vertex-weighted simple graph; the universe of nu is its edge set.
struct WeightedGraph {
    std::vector<std::string> vertex_labels;
    std::vector<double> vertex_weights;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::string> edge_labels;

    /// Unit-weight graph over vertices 0..vertex_count-1 with edges labelled e0, e1, ...
    static WeightedGraph unit(std::size_t vertex_count,
                              std::vector<std::pair<std::size_t, std::size_t>> edges);
};

/// exp(-d) of the closest cross pair: the maximum linkage function mind.
struct MaxLinkage {
    DistanceMatrix metric;
};
/// exp(-d) of the farthest cross pair (kappa_dist).
struct MinLinkage {
    DistanceMatrix metric;
};
/// Mean of exp(-d) over cross pairs (phi_dist).
struct AverageLinkage {
    DistanceMatrix metric;
};
/// Weighted vertex connectivity nu(X) = sum of weights of vertices touching X and its complement.
struct VertexConnectivity {
    WeightedGraph graph;
};
/// Table of 2^n native values indexed by bit pattern.
struct TabulatedFunction {
    std::size_t n = 0;
    std::vector<double> values;
    Axis axis = Axis::value;
};

using BuiltinKind =
    std::variant<MaxLinkage, MinLinkage, AverageLinkage, VertexConnectivity, TabulatedFunction>;

std::size_t universe_size(const BuiltinKind& kind);
double eval_builtin(const BuiltinKind& kind, Subset x);
ConnectivityFunction make_function(BuiltinKind kind);

/// Minimum distance across the cut (X, complement); +inf for X in {empty, U}.
double min_cross_distance(const DistanceMatrix& m, Subset x);
/// mind(X) = exp(-min_cross_distance), 0 on the trivial sets.
double eval_mind(const DistanceMatrix& m, Subset x);
ConnectivityFunction mind_function(const DistanceMatrix& m);

inline constexpr std::size_t kMaxAxiomCheckN = 24;
inline constexpr std::size_t kMaxPairSweepN = 13;
inline constexpr std::size_t kMaxSeparationN = 24;

enum class Axiom { normalized, symmetric, finite_nonnegative };
const char* to_string(Axiom axiom);

struct AxiomViolation {
    Axiom axiom;
    Subset witness;
};

struct AxiomReport {
    std::vector<AxiomViolation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Exhaustive check of normalization, symmetry and finiteness over all subsets.
AxiomReport check_axioms(const ConnectivityFunction& f);

enum class SetProperty { submodular, max_submodular };
const char* to_string(SetProperty p);

/// First (X, Y) in lexicographic bit order violating the inequality, if any.
std::optional<std::pair<Subset, Subset>> find_violation(SetProperty property,
                                                        const ConnectivityFunction& f);

/// Raised by operations that require maximum-submodularity and find it broken.
class NotMaxSubmodularError : public std::invalid_argument {
public:
    NotMaxSubmodularError(const std::string& what, Subset x, Subset y)
        : std::invalid_argument(what), x_{x}, y_{y} {}
    [[nodiscard]] Subset x() const { return x_; }
    [[nodiscard]] Subset y() const { return y_; }

private:
    Subset x_;
    Subset y_;
};

/// Throws NotMaxSubmodularError with the first violating pair. No-op above kMaxPairSweepN.
void require_max_submodular(const ConnectivityFunction& f);

struct Separation {
    double level;
    Subset argmin;  ///< lexicographically first minimizer
};

/// min f(X) over X with u in X and v not in X.
Separation min_separation(const ConnectivityFunction& f, std::size_t u, std::size_t v);

/// Pairwise separation levels, computed in one sweep over all subsets.
class SeparationTable {
public:
    explicit SeparationTable(const ConnectivityFunction& f);
    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] double level(std::size_t u, std::size_t v) const { return levels_[u * n_ + v]; }

private:
    std::size_t n_;
    std::vector<double> levels_;
};

struct ThresholdGraph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    Partition components;
};

/// Edge (u,v) iff min_separation(u,v) >= the threshold level.
ThresholdGraph threshold_graph(const SeparationTable& separations, double level);
ThresholdGraph threshold_graph(const ConnectivityFunction& f, Order k);

/// Minimal zero-valued blocks V_i with f(X) = max_i f(X & V_i).
Partition canonical_zero_partition(const ConnectivityFunction& f);

}  // namespace tanglekit
