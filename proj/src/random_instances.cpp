#include "tanglekit/random_instances.hpp"

#include <algorithm>
#include <stdexcept>

namespace tanglekit {

std::vector<std::string> default_labels(std::size_t n, const std::string& prefix) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

DistanceMatrix random_integer_metric(Rng& rng, std::size_t n, int max_weight) {
    if (max_weight < 1) {
        throw std::invalid_argument("max_weight must be positive");
    }
    std::uniform_int_distribution<int> weight(1, max_weight);
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            d[i][j] = d[j][i] = weight(rng);
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
            }
        }
    }
    return DistanceMatrix{default_labels(n), d};
}

PointCloud random_points(Rng& rng, std::size_t n, std::size_t dims) {
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    PointCloud cloud;
    cloud.labels = default_labels(n);
    while (cloud.coords.size() < n) {
        std::vector<double> p(dims);
        for (auto& x : p) {
            x = coord(rng);
        }
        if (std::find(cloud.coords.begin(), cloud.coords.end(), p) == cloud.coords.end()) {
            cloud.coords.push_back(std::move(p));
        }
    }
    return cloud;
}

Dendogram random_dendogram(Rng& rng, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("random_dendogram needs n >= 1");
    }
    Dendogram d;
    d.labels = default_labels(n);
    std::vector<Subset> blocks = Partition::singletons(n).blocks;
    d.radii.push_back(0.0);
    d.partitions.emplace_back(blocks);
    std::uniform_int_distribution<int> gap(1, 4);
    double r = 0.0;
    while (blocks.size() > 1) {
        r += 0.5 * gap(rng);
        std::shuffle(blocks.begin(), blocks.end(), rng);
        std::uniform_int_distribution<std::size_t> groups_dist(1, blocks.size() - 1);
        const auto groups = groups_dist(rng);
        // Assign blocks to fewer groups, keeping at least one merge.
        std::vector<Subset> merged(groups, Subset::empty(n));
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            auto g = i < groups ? i : std::uniform_int_distribution<std::size_t>(0, groups - 1)(rng);
            merged[g] = merged[g] | blocks[i];
        }
        blocks = merged;
        d.radii.push_back(r);
        d.partitions.emplace_back(blocks);
    }
    return d;
}

}  // namespace tanglekit
