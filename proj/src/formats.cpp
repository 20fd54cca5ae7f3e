#include "tanglekit/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "tanglekit/errors.hpp"
#include "tanglekit/text.hpp"

namespace tanglekit {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Non-empty, non-comment lines split on commas, with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> csv_rows(const std::string& text) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        if (t.find('"') != std::string::npos) {
            throw InputError("line " + std::to_string(number) + ": quoted CSV fields are not supported");
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(t);
        while (std::getline(ls, field, ',')) {
            fields.push_back(trim(field));
        }
        if (t.back() == ',') {
            fields.emplace_back();
        }
        rows.emplace_back(number, std::move(fields));
    }
    return rows;
}

double parse_real(const std::string& s, std::size_t line) {
    double x = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    if (!s.empty() && *b == '+') {
        ++b;
    }
    auto [ptr, ec] = std::from_chars(b, e, x);
    if (s.empty() || ec != std::errc{} || ptr != e) {
        throw InputError("line " + std::to_string(line) + ": '" + s + "' is not a number");
    }
    if (!std::isfinite(x)) {
        throw InputError("line " + std::to_string(line) + ": non-finite value '" + s + "'");
    }
    return x;
}

std::size_t label_index(const std::map<std::string, std::size_t>& index, const std::string& label,
                        const std::string& what) {
    auto it = index.find(label);
    if (it == index.end()) {
        throw InputError(what + ": unknown label '" + label + "'");
    }
    return it->second;
}

std::map<std::string, std::size_t> label_map(const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!index.emplace(labels[i], i).second) {
            throw InputError("duplicate label '" + labels[i] + "'");
        }
    }
    return index;
}

std::vector<std::string> string_list(const Json& j, const std::string& what) {
    if (!j.is_array()) {
        throw InputError(what + " must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) {
            throw InputError(what + " must be an array of strings");
        }
        out.push_back(x.get<std::string>());
    }
    return out;
}

const Json& field(const Json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(what + ": missing \"" + key + "\"");
    }
    return j.at(key);
}

Subset labelled_subset(const Json& j, const std::map<std::string, std::size_t>& index, std::size_t n,
                       const std::string& what) {
    Subset x = Subset::empty(n);
    for (const auto& label : string_list(j, what)) {
        auto i = label_index(index, label, what);
        if (x.contains(i)) {
            throw InputError(what + ": label '" + label + "' listed twice");
        }
        x = x.with(i);
    }
    return x;
}

Json subset_json(Subset x, const std::vector<std::string>& labels) {
    Json out = Json::array();
    for (auto i : x.elements()) {
        out.push_back(labels.at(i));
    }
    return out;
}

Json real_json(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    return x;
}

double json_real(const Json& j, const std::string& what) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string() && j.get<std::string>() == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    throw InputError(what + " must be a number or \"inf\"");
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

std::string newick_label(const std::string& s) {
    if (s.find_first_of(" \t()[]':;,") == std::string::npos && !s.empty()) {
        return s;
    }
    std::string out = "'";
    for (char c : s) {
        out += c;
        if (c == '\'') {
            out += '\'';
        }
    }
    return out + "'";
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(what + ": " + e.what());
    }
}

PointCloud read_points_csv(const std::string& text) {
    auto rows = csv_rows(text);
    if (rows.empty()) {
        throw InputError("points CSV: missing header");
    }
    const auto dims = rows.front().second.size();
    if (dims < 2) {
        throw InputError("points CSV: header needs a label column and at least one coordinate");
    }
    PointCloud cloud;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& [line, fields] = rows[r];
        if (fields.size() != dims) {
            throw InputError("line " + std::to_string(line) + ": expected " + std::to_string(dims) +
                             " fields, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw InputError("line " + std::to_string(line) + ": empty label");
        }
        cloud.labels.push_back(fields[0]);
        std::vector<double> p;
        for (std::size_t c = 1; c < dims; ++c) {
            p.push_back(parse_real(fields[c], line));
        }
        cloud.coords.push_back(std::move(p));
    }
    if (cloud.labels.empty()) {
        throw InputError("points CSV: no points");
    }
    try {
        validate_point_cloud(cloud);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("points CSV: ") + e.what());
    }
    return cloud;
}

std::string write_points_csv(const PointCloud& cloud) {
    std::string out = "label";
    const auto dims = cloud.coords.empty() ? 0 : cloud.coords.front().size();
    for (std::size_t c = 0; c < dims; ++c) {
        out += ",x" + std::to_string(c + 1);
    }
    out += "\n";
    for (std::size_t i = 0; i < cloud.labels.size(); ++i) {
        out += cloud.labels[i];
        for (auto x : cloud.coords[i]) {
            out += "," + format_number(x);
        }
        out += "\n";
    }
    return out;
}

RawMatrix read_matrix_csv(const std::string& text) {
    auto rows = csv_rows(text);
    if (rows.empty()) {
        throw InputError("matrix CSV: missing header");
    }
    RawMatrix m;
    const auto& header = rows.front().second;
    m.labels.assign(header.begin() + 1, header.end());
    const auto n = m.labels.size();
    label_map(m.labels);
    if (rows.size() != n + 1) {
        throw InputError("matrix CSV: header names " + std::to_string(n) + " labels but there are " +
                         std::to_string(rows.size() - 1) + " rows");
    }
    for (std::size_t r = 0; r < n; ++r) {
        const auto& [line, fields] = rows[r + 1];
        if (fields.size() != n + 1) {
            throw InputError("line " + std::to_string(line) + ": expected " + std::to_string(n + 1) +
                             " fields, got " + std::to_string(fields.size()));
        }
        if (fields[0] != m.labels[r]) {
            throw InputError("line " + std::to_string(line) + ": row label '" + fields[0] + "' should be '" +
                             m.labels[r] + "'");
        }
        std::vector<double> row;
        for (std::size_t c = 1; c <= n; ++c) {
            row.push_back(parse_real(fields[c], line));
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

std::string write_matrix_csv(const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows) {
    std::string out = "label";
    for (const auto& l : labels) {
        out += "," + l;
    }
    out += "\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out += labels[i];
        for (auto x : rows[i]) {
            out += "," + format_number(x);
        }
        out += "\n";
    }
    return out;
}

std::string write_matrix_csv(const DistanceMatrix& m) {
    return write_matrix_csv(m.labels(), m.rows());
}

Json dendogram_to_json(const Dendogram& d) {
    Json steps = Json::array();
    for (std::size_t i = 0; i < d.radii.size(); ++i) {
        Json blocks = Json::array();
        for (auto b : d.partitions[i].blocks) {
            blocks.push_back(subset_json(b, d.labels));
        }
        Json step;
        step["r"] = d.radii[i];
        step["blocks"] = std::move(blocks);
        steps.push_back(std::move(step));
    }
    Json out;
    out["labels"] = d.labels;
    out["steps"] = std::move(steps);
    return out;
}

Dendogram dendogram_from_json(const Json& j) {
    const std::string what = "dendogram JSON";
    Dendogram d;
    d.labels = string_list(field(j, "labels", what), what + " labels");
    auto index = label_map(d.labels);
    const auto n = d.labels.size();
    if (n == 0 || n > kMaxUniverse) {
        throw InputError(what + ": need between 1 and 64 labels");
    }
    const auto& steps = field(j, "steps", what);
    if (!steps.is_array() || steps.empty()) {
        throw InputError(what + ": \"steps\" must be a nonempty array");
    }
    for (const auto& step : steps) {
        d.radii.push_back(json_real(field(step, "r", what + " step"), what + " radius"));
        const auto& blocks = field(step, "blocks", what + " step");
        if (!blocks.is_array()) {
            throw InputError(what + ": \"blocks\" must be an array");
        }
        std::vector<Subset> parts;
        for (const auto& b : blocks) {
            parts.push_back(labelled_subset(b, index, n, what + " block"));
        }
        Partition p{std::move(parts)};
        if (!p.is_valid(n)) {
            throw InputError(what + ": step at r=" + format_number(d.radii.back()) + " is not a partition");
        }
        d.partitions.push_back(std::move(p));
    }
    return d;
}

Json tabulated_to_json(const ConnectivityFunction& f, const std::vector<std::string>& labels) {
    const auto n = f.universe_size();
    if (labels.size() != n) {
        throw std::invalid_argument("label count does not match the universe");
    }
    Json values = Json::array();
    for (std::uint64_t bits = 0; bits < subset_count(n); ++bits) {
        Subset x{n, bits};
        values.push_back(real_json(f.axis() == Axis::radius ? f.radius(x) : f.value(x)));
    }
    Json out;
    out["n"] = n;
    out["labels"] = labels;
    out["axis"] = f.axis() == Axis::radius ? "radius" : "value";
    out["values"] = std::move(values);
    return out;
}

LabeledTable tabulated_from_json(const Json& j) {
    const std::string what = "tabulated JSON";
    const auto& nj = field(j, "n", what);
    if (!nj.is_number_unsigned()) {
        throw InputError(what + ": \"n\" must be a nonnegative integer");
    }
    const auto n = nj.get<std::size_t>();
    if (n > 30) {
        throw InputError(what + ": n=" + std::to_string(n) + " is too large to tabulate");
    }
    LabeledTable out;
    if (j.contains("labels")) {
        out.labels = string_list(j.at("labels"), what + " labels");
        label_map(out.labels);
        if (out.labels.size() != n) {
            throw InputError(what + ": expected " + std::to_string(n) + " labels");
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            out.labels.push_back(std::to_string(i));
        }
    }
    out.table.n = n;
    out.table.axis = Axis::value;
    if (j.contains("axis")) {
        const auto& a = j.at("axis");
        if (a == "radius") {
            out.table.axis = Axis::radius;
        } else if (a != "value") {
            throw InputError(what + ": \"axis\" must be \"value\" or \"radius\"");
        }
    }
    const auto& values = field(j, "values", what);
    if (!values.is_array() || values.size() != (std::size_t{1} << n)) {
        throw InputError(what + ": \"values\" must hold 2^n = " + std::to_string(std::size_t{1} << n) + " entries");
    }
    for (const auto& v : values) {
        out.table.values.push_back(json_real(v, what + " value"));
    }
    return out;
}

Json catalog_to_json(const TangleCatalog& c, const std::vector<std::string>& labels) {
    Json entries = Json::array();
    for (const auto& e : c.entries) {
        Json t;
        t["core"] = subset_json(e.core, labels);
        t["r_lo"] = real_json(e.r_lo);
        t["r_hi"] = real_json(e.r_hi);
        t["k_hi"] = std::exp(-e.r_lo);
        t["k_lo"] = std::exp(-e.r_hi);
        entries.push_back(std::move(t));
    }
    Json out;
    out["labels"] = labels;
    out["entries"] = std::move(entries);
    return out;
}

PreDecomposition pre_decomposition_from_json(const Json& j, const std::vector<std::string>& labels) {
    const std::string what = "pre-decomposition JSON";
    auto ids = string_list(field(j, "vertices", what), what + " vertices");
    std::map<std::string, std::size_t> vindex;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!vindex.emplace(ids[i], i).second) {
            throw InputError(what + ": duplicate vertex '" + ids[i] + "'");
        }
    }
    const auto& ej = field(j, "edges", what);
    if (!ej.is_array()) {
        throw InputError(what + ": \"edges\" must be an array");
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : ej) {
        auto ends = string_list(e, what + " edge");
        if (ends.size() != 2) {
            throw InputError(what + ": every edge needs two endpoints");
        }
        edges.emplace_back(label_index(vindex, ends[0], what + " edge"), label_index(vindex, ends[1], what + " edge"));
    }
    TernaryTree tree;
    try {
        tree = TernaryTree{ids, edges};
    } catch (const std::invalid_argument& e) {
        throw InputError(what + ": " + e.what());
    }
    const auto n = labels.size();
    auto index = label_map(labels);
    PreDecomposition pd{tree, n};

    std::map<std::pair<std::size_t, std::size_t>, Subset> given;
    const auto& gj = field(j, "gamma", what);
    if (!gj.is_object()) {
        throw InputError(what + ": \"gamma\" must be an object");
    }
    for (const auto& [key, value] : gj.items()) {
        auto arrow = key.find("->");
        if (arrow == std::string::npos) {
            throw InputError(what + ": gamma key '" + key + "' is not of the form s->t");
        }
        auto s = label_index(vindex, key.substr(0, arrow), what + " gamma");
        auto t = label_index(vindex, key.substr(arrow + 2), what + " gamma");
        const auto& adj = tree.neighbors(s);
        if (!std::binary_search(adj.begin(), adj.end(), t)) {
            throw InputError(what + ": gamma key '" + key + "' is not a tree edge");
        }
        given[{s, t}] = labelled_subset(value, index, n, what + " gamma '" + key + "'");
    }
    for (auto [s, t] : tree.edges()) {
        auto fwd = given.find({s, t});
        auto bwd = given.find({t, s});
        if (fwd == given.end() && bwd == given.end()) {
            throw InputError(what + ": no gamma for edge " + ids[s] + " -- " + ids[t]);
        }
        if (fwd != given.end() && bwd != given.end() && bwd->second != fwd->second.complement()) {
            throw InputError(what + ": gamma(" + ids[s] + "," + ids[t] + ") and gamma(" + ids[t] + "," + ids[s] +
                             ") are not complements");
        }
        if (fwd != given.end()) {
            pd.set_gamma(s, t, fwd->second);
        } else {
            pd.set_gamma(t, s, bwd->second);
        }
    }
    return pd;
}

Json pre_decomposition_to_json(const PreDecomposition& pd, const std::vector<std::string>& labels) {
    const auto& tree = pd.tree();
    Json edges = Json::array();
    Json gamma = Json::object();
    for (auto [s, t] : tree.edges()) {
        edges.push_back({tree.id(s), tree.id(t)});
        gamma[tree.id(s) + "->" + tree.id(t)] = subset_json(pd.gamma(s, t), labels);
    }
    Json out;
    out["vertices"] = tree.ids();
    out["edges"] = std::move(edges);
    out["gamma"] = std::move(gamma);
    return out;
}

WeightedGraph graph_from_json(const Json& j) {
    const std::string what = "graph JSON";
    WeightedGraph g;
    g.vertex_labels = string_list(field(j, "vertices", what), what + " vertices");
    auto index = label_map(g.vertex_labels);
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        if (!w.is_array() || w.size() != g.vertex_labels.size()) {
            throw InputError(what + ": \"weights\" must have one entry per vertex");
        }
        for (const auto& x : w) {
            if (!x.is_number()) {
                throw InputError(what + ": weights must be numbers");
            }
            g.vertex_weights.push_back(x.get<double>());
        }
    } else {
        g.vertex_weights.assign(g.vertex_labels.size(), 1.0);
    }
    const auto& ej = field(j, "edges", what);
    if (!ej.is_array()) {
        throw InputError(what + ": \"edges\" must be an array");
    }
    for (const auto& e : ej) {
        auto ends = string_list(e, what + " edge");
        if (ends.size() != 2) {
            throw InputError(what + ": every edge needs two endpoints");
        }
        g.edges.emplace_back(label_index(index, ends[0], what), label_index(index, ends[1], what));
    }
    if (j.contains("edge_labels")) {
        g.edge_labels = string_list(j.at("edge_labels"), what + " edge_labels");
        label_map(g.edge_labels);
    } else {
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            g.edge_labels.push_back("e" + std::to_string(i));
        }
    }
    try {
        make_function(VertexConnectivity{g});
    } catch (const std::invalid_argument& e) {
        throw InputError(what + ": " + e.what());
    }
    return g;
}

std::string decomposition_to_dot(const PreDecomposition& pd, const ConnectivityFunction& f,
                                 const std::vector<std::string>& labels) {
    const auto& tree = pd.tree();
    std::string out = "graph decomposition {\n";
    for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
        out += "  " + dot_quote(tree.id(v));
        if (tree.is_leaf(v)) {
            out += " [shape=box, label=" + dot_quote(format_subset(pd.atom(v), labels)) + "]";
        } else {
            out += " [shape=point]";
        }
        out += ";\n";
    }
    for (auto [s, t] : tree.edges()) {
        auto x = pd.gamma(s, t);
        out += "  " + dot_quote(tree.id(s)) + " -- " + dot_quote(tree.id(t)) + " [label=" +
               dot_quote("γ=" + format_subset(x, labels) + " κ=" + format_number(f.value(x))) + "];\n";
    }
    return out + "}\n";
}

std::string dendogram_to_newick(const Dendogram& d) {
    auto report = validate_dendogram(d);
    if (!report.ok()) {
        throw std::invalid_argument("cannot export an invalid dendogram: " + report.issues.front().detail);
    }
    const auto n = d.size();
    // A node is a block together with the step at which it first appears.
    std::function<std::string(Subset, std::size_t)> node = [&](Subset b, std::size_t step) -> std::string {
        if (step == 0) {
            return newick_label(d.labels[b.lowest()]);
        }
        std::string out = "(";
        bool first = true;
        for (auto c : d.partitions[step - 1].blocks) {
            if (!c.is_subset_of(b)) {
                continue;
            }
            std::size_t birth = step - 1;
            while (birth > 0) {
                const auto& prev = d.partitions[birth - 1].blocks;
                if (std::find(prev.begin(), prev.end(), c) == prev.end()) {
                    break;
                }
                --birth;
            }
            out += (first ? "" : ",") + node(c, birth) + ":" + format_number(d.radii[step] - d.radii[birth]);
            first = false;
        }
        return out + ")r=" + format_number(d.radii[step]);
    };
    const auto last = d.partitions.size() - 1;
    return node(Subset::full(n), last) + ";\n";
}

}  // namespace tanglekit
