#include "fixtures.hpp"

#include <vector>

#include "tanglekit/formats.hpp"

namespace fixtures {

using namespace tanglekit;

std::string data_path(const std::string& name) {
    return std::string(TANGLEKIT_DATA_DIR) + "/" + name;
}

PointCloud fig2_points() {
    return read_points_csv(read_text_file(data_path("fig2_points.csv")));
}

DistanceMatrix fig2_metric() {
    return distance_matrix_from_points(fig2_points());
}

DistanceMatrix l4_metric() {
    PointCloud c{{"1", "2", "-1", "-2"}, {{1.0}, {2.0}, {-1.0}, {-2.0}}};
    return distance_matrix_from_points(c);
}

DistanceMatrix pair_metric(double d) {
    return DistanceMatrix({"x", "y"}, {{0.0, d}, {d, 0.0}});
}

Subset set_of(const DistanceMatrix& m, std::initializer_list<const char*> labels) {
    auto x = Subset::empty(m.size());
    for (auto l : labels) {
        x = x.with(m.index_of(l));
    }
    return x;
}

Partition partition_of(const DistanceMatrix& m, std::initializer_list<std::initializer_list<const char*>> blocks) {
    std::vector<Subset> out;
    for (auto b : blocks) {
        out.push_back(set_of(m, b));
    }
    return Partition{out};
}

}  // namespace fixtures
