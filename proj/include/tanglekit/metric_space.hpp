#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tanglekit {

/// Labeled points in R^d.
struct PointCloud {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> coords;
};

/// Throws std::invalid_argument on duplicate labels, ragged or non-finite coordinates.
void validate_point_cloud(const PointCloud& cloud);

enum class MetricAxiom { zero_diagonal, symmetry, positivity, triangle };

const char* to_string(MetricAxiom axiom);

struct MetricViolation {
    MetricAxiom axiom;
    /// Lexicographically least witness: (i) for the diagonal, (i, j) for symmetry and
    /// positivity, (x, y, z) with d(x,z) > d(x,y) + d(y,z) for the triangle inequality.
    std::vector<std::size_t> witness;
    std::string describe(const std::vector<std::string>& labels) const;
};

/// One entry per violated axiom; empty iff the matrix is a valid metric.
struct MetricReport {
    std::vector<MetricViolation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks every metric axiom. Throws std::invalid_argument for structural problems
/// (non-square, label count mismatch, non-finite entries).
MetricReport validate_metric(const std::vector<std::string>& labels,
                             const std::vector<std::vector<double>>& rows);

/// Symmetric, strictly positive, finite metric on labeled points.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    /// Validates; throws std::invalid_argument naming the first violated axiom.
    DistanceMatrix(std::vector<std::string> labels, const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    [[nodiscard]] const std::string& label(std::size_t i) const { return labels_.at(i); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return d_[i * size() + j]; }
    [[nodiscard]] std::vector<std::vector<double>> rows() const;

    /// Index of a label; throws std::invalid_argument if unknown.
    [[nodiscard]] std::size_t index_of(const std::string& label) const;

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<double> d_;
};

/// Euclidean distances. Throws std::invalid_argument on identical points, naming the pair.
DistanceMatrix distance_matrix_from_points(const PointCloud& cloud);

/// Lexicographically least (x, y, z) with max(u(x,y), u(y,z)) < u(x,z), if any.
std::optional<std::array<std::size_t, 3>> ultrametric_check(const DistanceMatrix& m);

/// A distance matrix known to satisfy the strong triangle inequality.
class Ultrametric {
public:
    Ultrametric() = default;

    /// Throws std::invalid_argument with the violating triple if m is not ultrametric.
    explicit Ultrametric(DistanceMatrix m);

    [[nodiscard]] const DistanceMatrix& matrix() const { return m_; }
    [[nodiscard]] std::size_t size() const { return m_.size(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    [[nodiscard]] const std::vector<std::string>& labels() const { return m_.labels(); }

    friend bool operator==(const Ultrametric&, const Ultrametric&) = default;

private:
    DistanceMatrix m_;
};

}  // namespace tanglekit
