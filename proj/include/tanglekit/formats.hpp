#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tanglekit/clustering.hpp"
#include "tanglekit/connectivity.hpp"
#include "tanglekit/decomposition.hpp"
#include "tanglekit/metric_space.hpp"
#include "tanglekit/tangle.hpp"

namespace tanglekit {

using Json = nlohmann::ordered_json;

/// Whole file as a string; throws InputError if unreadable.
std::string read_text_file(const std::string& path);
/// Throws InputError with the parser's position on malformed JSON.
Json parse_json(const std::string& text, const std::string& what);

/// Header "label,x1,...,xd", then one row per point.
PointCloud read_points_csv(const std::string& text);
std::string write_points_csv(const PointCloud& cloud);

/// Square matrix as read, before any metric validation.
struct RawMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
};

/// Header "label,<l1>,...,<ln>", then rows "<li>,d(i,1),...,d(i,n)" in header order.
RawMatrix read_matrix_csv(const std::string& text);
std::string write_matrix_csv(const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows);
std::string write_matrix_csv(const DistanceMatrix& m);

/// {"labels":[...],"steps":[{"r":0.0,"blocks":[["a"],...]},...]}
Json dendogram_to_json(const Dendogram& d);
Dendogram dendogram_from_json(const Json& j);

/// Tabulated function with element labels: {"n","labels","axis","values"}; values are
/// indexed by bit pattern, "inf" encodes an infinite radius.
struct LabeledTable {
    std::vector<std::string> labels;
    TabulatedFunction table;
};
Json tabulated_to_json(const ConnectivityFunction& f, const std::vector<std::string>& labels);
LabeledTable tabulated_from_json(const Json& j);

/// {"labels":[...],"entries":[{"core":[...],"r_lo","r_hi","k_hi","k_lo"}]}
Json catalog_to_json(const TangleCatalog& c, const std::vector<std::string>& labels);

/// {"vertices":[ids],"edges":[[s,t]],"gamma":{"s->t":[labels]}}; one direction per edge,
/// the other is the complement (both may be given if consistent).
PreDecomposition pre_decomposition_from_json(const Json& j, const std::vector<std::string>& labels);
Json pre_decomposition_to_json(const PreDecomposition& pd, const std::vector<std::string>& labels);

/// {"vertices":[labels],"weights":[...],"edges":[[u,v],...],"edge_labels":[...]}; weights
/// default to 1 and edge labels to e0, e1, ...; endpoints are vertex labels.
WeightedGraph graph_from_json(const Json& j);

/// Leaves labelled with their atoms, edges s -- t (s < t) with "γ={...} κ=<value>" for gamma(s,t).
std::string decomposition_to_dot(const PreDecomposition& pd, const ConnectivityFunction& f,
                                 const std::vector<std::string>& labels);

/// Merge tree with polytomies; internal nodes labelled r=<radius>, branch lengths are radius gaps.
std::string dendogram_to_newick(const Dendogram& d);

}  // namespace tanglekit
