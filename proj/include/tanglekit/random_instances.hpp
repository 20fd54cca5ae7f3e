#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "tanglekit/clustering.hpp"
#include "tanglekit/metric_space.hpp"

namespace tanglekit {

using Rng = std::mt19937_64;

/// "p0", "p1", ...
std::vector<std::string> default_labels(std::size_t n, const std::string& prefix = "p");

/// Shortest-path closure of random integer weights in [1, max_weight]; ties are frequent.
DistanceMatrix random_integer_metric(Rng& rng, std::size_t n, int max_weight = 9);

/// Distinct points with uniform real coordinates in [0, 10)^dims.
PointCloud random_points(Rng& rng, std::size_t n, std::size_t dims = 2);

/// Random merge sequence with strictly increasing positive radii.
Dendogram random_dendogram(Rng& rng, std::size_t n);

}  // namespace tanglekit
