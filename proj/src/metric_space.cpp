#include "tanglekit/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace tanglekit {

namespace {

// Euclidean distances of collinear points can overshoot the triangle
// inequality by a few ulps after sqrt; tolerate that and nothing more.
constexpr double kTriangleSlack = 1e-12;

std::string witness_text(const std::vector<std::size_t>& witness,
                         const std::vector<std::string>& labels) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < witness.size(); ++i) {
        if (i > 0) {
            os << ',';
        }
        auto idx = witness[i];
        os << (idx < labels.size() ? labels[idx] : std::to_string(idx));
    }
    os << ')';
    return os.str();
}

}  // namespace

void validate_point_cloud(const PointCloud& cloud) {
    if (cloud.labels.size() != cloud.coords.size()) {
        throw std::invalid_argument("point cloud: label count does not match coordinate count");
    }
    std::set<std::string> seen;
    for (const auto& l : cloud.labels) {
        if (!seen.insert(l).second) {
            throw std::invalid_argument("point cloud: duplicate label '" + l + "'");
        }
    }
    if (cloud.coords.empty()) {
        return;
    }
    auto dim = cloud.coords.front().size();
    for (std::size_t i = 0; i < cloud.coords.size(); ++i) {
        if (cloud.coords[i].size() != dim) {
            throw std::invalid_argument("point cloud: point '" + cloud.labels[i] +
                                        "' has a different dimension");
        }
        for (double c : cloud.coords[i]) {
            if (!std::isfinite(c)) {
                throw std::invalid_argument("point cloud: non-finite coordinate at '" +
                                            cloud.labels[i] + "'");
            }
        }
    }
}

const char* to_string(MetricAxiom axiom) {
    switch (axiom) {
        case MetricAxiom::zero_diagonal: return "zero-diagonal";
        case MetricAxiom::symmetry: return "symmetry";
        case MetricAxiom::positivity: return "positivity";
        case MetricAxiom::triangle: return "triangle";
    }
    return "unknown";
}

std::string MetricViolation::describe(const std::vector<std::string>& labels) const {
    return std::string(to_string(axiom)) + " violation at " + witness_text(witness, labels);
}

MetricReport validate_metric(const std::vector<std::string>& labels,
                             const std::vector<std::vector<double>>& rows) {
    const auto n = rows.size();
    if (labels.size() != n) {
        throw std::invalid_argument("matrix: " + std::to_string(labels.size()) + " labels for " +
                                    std::to_string(n) + " rows");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw std::invalid_argument("matrix: row " + std::to_string(i) + " has " +
                                        std::to_string(rows[i].size()) + " entries, expected " +
                                        std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(rows[i][j])) {
                throw std::invalid_argument("matrix: non-finite entry at (" + std::to_string(i) +
                                            "," + std::to_string(j) + ")");
            }
        }
    }

    MetricReport report;
    auto first = [&](MetricAxiom axiom, auto&& predicate, std::size_t arity) {
        if (arity == 1) {
            for (std::size_t i = 0; i < n; ++i) {
                if (predicate(i, i, i)) {
                    report.violations.push_back({axiom, {i}});
                    return;
                }
            }
            return;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (arity == 2) {
                    if (predicate(i, j, j)) {
                        report.violations.push_back({axiom, {i, j}});
                        return;
                    }
                    continue;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    if (predicate(i, j, k)) {
                        report.violations.push_back({axiom, {i, j, k}});
                        return;
                    }
                }
            }
        }
    };

    first(MetricAxiom::zero_diagonal,
          [&](std::size_t i, std::size_t, std::size_t) { return rows[i][i] != 0.0; }, 1);
    first(MetricAxiom::symmetry,
          [&](std::size_t i, std::size_t j, std::size_t) {
              return i < j && rows[i][j] != rows[j][i];
          },
          2);
    first(MetricAxiom::positivity,
          [&](std::size_t i, std::size_t j, std::size_t) { return i != j && !(rows[i][j] > 0.0); },
          2);
    first(MetricAxiom::triangle,
          [&](std::size_t x, std::size_t y, std::size_t z) {
              if (x == y || y == z || x == z) {
                  return false;
              }
              auto bound = rows[x][y] + rows[y][z];
              return rows[x][z] > bound + kTriangleSlack * std::abs(bound);
          },
          3);
    return report;
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels,
                               const std::vector<std::vector<double>>& rows) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw std::invalid_argument("matrix: duplicate label '" + l + "'");
        }
    }
    auto report = validate_metric(labels, rows);
    if (!report.ok()) {
        throw std::invalid_argument("not a metric: " + report.violations.front().describe(labels));
    }
    labels_ = std::move(labels);
    const auto n = labels_.size();
    d_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(rows[i].begin(), rows[i].end(), d_.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
}

std::vector<std::vector<double>> DistanceMatrix::rows() const {
    const auto n = size();
    std::vector<std::vector<double>> out(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[i][j] = (*this)(i, j);
        }
    }
    return out;
}

std::size_t DistanceMatrix::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw std::invalid_argument("unknown label '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

DistanceMatrix distance_matrix_from_points(const PointCloud& cloud) {
    validate_point_cloud(cloud);
    const auto n = cloud.labels.size();
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t c = 0; c < cloud.coords[i].size(); ++c) {
                auto delta = cloud.coords[i][c] - cloud.coords[j][c];
                sum += delta * delta;
            }
            auto d = std::sqrt(sum);
            if (d == 0.0) {
                throw std::invalid_argument("duplicate points '" + cloud.labels[i] + "' and '" +
                                            cloud.labels[j] + "'");
            }
            rows[i][j] = rows[j][i] = d;
        }
    }
    return DistanceMatrix(cloud.labels, rows);
}

std::optional<std::array<std::size_t, 3>> ultrametric_check(const DistanceMatrix& m) {
    const auto n = m.size();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) {
                    continue;
                }
                if (std::max(m(x, y), m(y, z)) < m(x, z)) {
                    return std::array<std::size_t, 3>{x, y, z};
                }
            }
        }
    }
    return std::nullopt;
}

Ultrametric::Ultrametric(DistanceMatrix m) : m_{std::move(m)} {
    if (auto triple = ultrametric_check(m_)) {
        const auto& l = m_.labels();
        throw std::invalid_argument("not an ultrametric: strong triangle inequality fails at (" +
                                    l[(*triple)[0]] + "," + l[(*triple)[1]] + "," +
                                    l[(*triple)[2]] + ")");
    }
}

}  // namespace tanglekit
