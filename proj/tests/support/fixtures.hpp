#pragma once

#include <initializer_list>
#include <string>

#include "tanglekit/clustering.hpp"
#include "tanglekit/metric_space.hpp"

namespace fixtures {

std::string data_path(const std::string& name);

tanglekit::PointCloud fig2_points();
/// a..g as drawn: merge radii 1, 2, 3, 5.
tanglekit::DistanceMatrix fig2_metric();
/// Points 1, 2, -1, -2 on a line.
tanglekit::DistanceMatrix l4_metric();
tanglekit::DistanceMatrix pair_metric(double d);

tanglekit::Subset set_of(const tanglekit::DistanceMatrix& m, std::initializer_list<const char*> labels);
tanglekit::Partition partition_of(const tanglekit::DistanceMatrix& m,
                                  std::initializer_list<std::initializer_list<const char*>> blocks);

}  // namespace fixtures
