#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tanglekit/clustering.hpp"
#include "tanglekit/connectivity.hpp"
#include "tanglekit/decomposition.hpp"
#include "tanglekit/errors.hpp"
#include "tanglekit/formats.hpp"
#include "tanglekit/metric_space.hpp"
#include "tanglekit/random_instances.hpp"
#include "tanglekit/tangle.hpp"
#include "tanglekit/text.hpp"

namespace tanglekit::cli {

namespace {

struct Options {
    std::string input;
    std::string format;
    std::string output;
    std::string out_format;
    std::string function = "mind";
    bool function_given = false;
    std::string metric;
    std::string metric_format;
    std::string core;
    std::string target;
    std::optional<double> order;
    std::optional<double> radius;
    double tie_eps = 0.0;
    std::optional<std::size_t> max_n;
    std::uint64_t seed = 1;
};

struct Loaded {
    std::string format;
    std::vector<std::string> labels;
    std::optional<RawMatrix> raw;
    std::optional<PointCloud> points;
    std::optional<Dendogram> dendogram;
    std::optional<LabeledTable> table;
    std::optional<WeightedGraph> graph;
    Json json;
};

const std::vector<std::string> kFormats{"points", "matrix", "dendogram", "tabulated", "predecomposition", "graph"};

std::string detect_format(const std::string& text) {
    auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && text[start] == '{') {
        auto j = parse_json(text, "input");
        if (j.contains("steps")) {
            return "dendogram";
        }
        if (j.contains("values")) {
            return "tabulated";
        }
        if (j.contains("gamma")) {
            return "predecomposition";
        }
        if (j.contains("edges")) {
            return "graph";
        }
        throw InputError("cannot tell the JSON input format; pass --format");
    }
    // A matrix header repeats the row labels in order.
    try {
        auto m = read_matrix_csv(text);
        if (!m.labels.empty()) {
            return "matrix";
        }
    } catch (const InputError&) {
    }
    return "points";
}

Loaded load(const std::string& path, std::string format) {
    if (path.empty()) {
        throw InputError("--input is required");
    }
    auto text = read_text_file(path);
    if (format.empty()) {
        format = detect_format(text);
    }
    Loaded in;
    in.format = format;
    if (format == "points") {
        in.points = read_points_csv(text);
        in.labels = in.points->labels;
    } else if (format == "matrix") {
        in.raw = read_matrix_csv(text);
        in.labels = in.raw->labels;
    } else if (format == "dendogram") {
        in.dendogram = dendogram_from_json(parse_json(text, path));
        in.labels = in.dendogram->labels;
    } else if (format == "tabulated") {
        in.table = tabulated_from_json(parse_json(text, path));
        in.labels = in.table->labels;
    } else if (format == "graph") {
        in.graph = graph_from_json(parse_json(text, path));
        in.labels = in.graph->edge_labels;
    } else if (format == "predecomposition") {
        in.json = parse_json(text, path);
    } else {
        throw InputError("unknown input format '" + format + "'");
    }
    return in;
}

void enforce_max_n(const Options& o, std::size_t n) {
    if (o.max_n && n > *o.max_n) {
        throw SizeCapError("--max-n", *o.max_n, n);
    }
}

DistanceMatrix metric_of(const Loaded& in, const Options& o) {
    try {
        if (in.points) {
            enforce_max_n(o, in.points->labels.size());
            return distance_matrix_from_points(*in.points);
        }
        if (in.raw) {
            enforce_max_n(o, in.raw->labels.size());
            return DistanceMatrix{in.raw->labels, in.raw->rows};
        }
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    throw InputError("this command needs points or matrix input, got " + in.format);
}

std::string canonical_function(const std::string& name) {
    if (name == "phi") {
        return "phi-dist";
    }
    if (name == "kappa") {
        return "kappa-dist";
    }
    return name;
}

ConnectivityFunction function_of(const Loaded& in, const Options& o) {
    const auto name = canonical_function(o.function);
    if (in.points || in.raw) {
        auto m = metric_of(in, o);
        if (name == "mind") {
            return make_function(MaxLinkage{m});
        }
        if (name == "kappa-dist") {
            return make_function(MinLinkage{m});
        }
        if (name == "phi-dist") {
            return make_function(AverageLinkage{m});
        }
        throw InputError("--function " + o.function + " cannot be built from a metric");
    }
    if (in.graph) {
        if (o.function_given && name != "nu") {
            throw InputError("graph input only supports --function nu");
        }
        enforce_max_n(o, in.graph->edges.size());
        return make_function(VertexConnectivity{*in.graph});
    }
    if (in.table) {
        if (o.function_given && name != "tabulated") {
            throw InputError("tabulated input only supports --function tabulated");
        }
        enforce_max_n(o, in.table->table.n);
        try {
            return make_function(in.table->table);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    if (in.dendogram) {
        enforce_max_n(o, in.dendogram->size());
        return kappa_from_dendogram(*in.dendogram);
    }
    throw InputError("input format " + in.format + " does not define a connectivity function");
}

Order order_of(const Options& o) {
    if (o.radius) {
        return Order::from_radius(*o.radius);
    }
    if (o.order) {
        return Order::from_value(*o.order);
    }
    throw InputError("this command needs --order or --radius");
}

void emit(const Options& o, const std::string& content, std::ostream& out) {
    if (o.output.empty() || o.output == "-") {
        out << content;
        return;
    }
    std::ofstream file(o.output, std::ios::binary);
    if (!file || !(file << content)) {
        throw InputError("cannot write '" + o.output + "'");
    }
}

std::string out_format(const Options& o, const std::string& fallback, const std::vector<std::string>& allowed) {
    auto f = o.out_format.empty() ? fallback : o.out_format;
    if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
        throw InputError("--out-format " + f + " is not available for this command");
    }
    return f;
}

std::string order_text(Order k) {
    return "k=" + format_number(k.value()) + " r=" + format_number(k.radius());
}

Subset parse_core(const std::string& text, const std::vector<std::string>& labels) {
    Subset core = Subset::empty(labels.size());
    std::istringstream in(text);
    std::string label;
    while (std::getline(in, label, ',')) {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            throw InputError("--core names unknown label '" + label + "'");
        }
        core = core.with(static_cast<std::size_t>(it - labels.begin()));
    }
    return core;
}

int cmd_cluster(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    auto d = single_linkage(metric_of(in, o), o.tie_eps);
    auto fmt = out_format(o, "json", {"json", "newick"});
    emit(o, fmt == "json" ? dendogram_to_json(d).dump(2) + "\n" : dendogram_to_newick(d), out);
    return pass;
}

int cmd_ultrametric(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    out_format(o, "csv", {"csv"});
    emit(o, write_matrix_csv(minimax_ultrametric(metric_of(in, o)).matrix()), out);
    return pass;
}

int cmd_tangles(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    auto f = function_of(in, o);
    out_format(o, "json", {"json"});
    emit(o, catalog_to_json(enumerate_tangles(f), in.labels).dump(2) + "\n", out);
    return pass;
}

int cmd_branch_width(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    auto f = function_of(in, o);
    auto bw = branch_width_exact(f);
    auto fmt = out_format(o, "dot", {"dot", "json"});
    if (fmt == "dot") {
        emit(o, "// branch width " + order_text(bw.width) + " trees=" + std::to_string(bw.trees_enumerated) + "\n" +
                    decomposition_to_dot(bw.witness, f, in.labels),
             out);
    } else {
        Json j;
        j["width"] = bw.width.value();
        j["radius"] = bw.width.radius();
        j["trees"] = bw.trees_enumerated;
        j["decomposition"] = pre_decomposition_to_json(bw.witness, in.labels);
        emit(o, j.dump(2) + "\n", out);
    }
    return pass;
}

int cmd_exactify(const Options& o, std::ostream& out) {
    if (o.metric.empty()) {
        throw InputError("exactify needs --metric for the universe and its connectivity function");
    }
    auto source = load(o.metric, o.metric_format);
    auto f = function_of(source, o);
    auto pd_in = load(o.input, o.format.empty() ? "predecomposition" : o.format);
    if (pd_in.format != "predecomposition") {
        throw InputError("exactify reads a pre-decomposition");
    }
    auto pd = pre_decomposition_from_json(pd_in.json, source.labels);
    auto exact = exactness_transform(pd, f);
    auto fmt = out_format(o, "dot", {"dot", "json"});
    emit(o, fmt == "dot" ? decomposition_to_dot(exact, f, source.labels)
                         : pre_decomposition_to_json(exact, source.labels).dump(2) + "\n",
         out);
    return pass;
}

int cmd_convert(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    if (in.dendogram) {
        out_format(o, "csv", {"csv"});
        emit(o, write_matrix_csv(psi(*in.dendogram).matrix()), out);
        return pass;
    }
    if (in.raw) {
        Ultrametric u{metric_of(in, o)};
        auto d = psi_inverse(u);
        auto fmt = out_format(o, "json", {"json", "newick"});
        emit(o, fmt == "json" ? dendogram_to_json(d).dump(2) + "\n" : dendogram_to_newick(d), out);
        return pass;
    }
    throw InputError("convert reads a dendogram (JSON) or an ultrametric (matrix CSV)");
}

int cmd_kappa(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    out_format(o, "json", {"json"});
    if (in.dendogram) {
        enforce_max_n(o, in.dendogram->size());
        enforce_cap("kappa", kMaxTabulateN, in.dendogram->size());
        emit(o, tabulated_to_json(kappa_from_dendogram(*in.dendogram), in.labels).dump(2) + "\n", out);
        return pass;
    }
    auto f = function_of(in, o);
    emit(o, dendogram_to_json(dendogram_from_kappa(f, in.labels)).dump(2) + "\n", out);
    return pass;
}

int report(bool ok, const std::string& what, std::ostream& out) {
    out << (ok ? "pass: " : "violation: ") << what << "\n";
    return ok ? pass : violation;
}

int check_metric(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    if (in.points) {
        enforce_max_n(o, in.points->labels.size());
        try {
            distance_matrix_from_points(*in.points);
        } catch (const std::invalid_argument& e) {
            return report(false, e.what(), out);
        }
        return report(true, "metric on " + std::to_string(in.labels.size()) + " points", out);
    }
    if (!in.raw) {
        throw InputError("check metric needs points or matrix input");
    }
    enforce_max_n(o, in.raw->labels.size());
    MetricReport r;
    try {
        r = validate_metric(in.raw->labels, in.raw->rows);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    for (const auto& v : r.violations) {
        out << "violation: " << to_string(v.axiom) << " " << v.describe(in.labels) << "\n";
    }
    if (!r.ok()) {
        return violation;
    }
    return report(true, "metric on " + std::to_string(in.labels.size()) + " points", out);
}

int check_ultrametric(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    auto m = metric_of(in, o);
    if (auto t = ultrametric_check(m)) {
        auto [x, y, z] = *t;
        const auto& l = m.labels();
        return report(false,
                      "strong triangle inequality fails at (" + l[x] + "," + l[y] + "," + l[z] + "): max(" +
                          format_number(m(x, y)) + "," + format_number(m(y, z)) + ") < " + format_number(m(x, z)),
                      out);
    }
    return report(true, "ultrametric", out);
}

int check_axioms_cmd(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    auto f = function_of(in, o);
    auto r = check_axioms(f);
    for (const auto& v : r.violations) {
        out << "violation: " << to_string(v.axiom) << " at X=" << format_subset(v.witness, in.labels) << "\n";
    }
    return r.ok() ? report(true, "connectivity function axioms", out) : violation;
}

int check_property(const Options& o, SetProperty p, std::ostream& out) {
    auto in = load(o.input, o.format);
    auto f = function_of(in, o);
    enforce_cap(to_string(p), kMaxPairSweepN, f.universe_size());
    if (auto v = find_violation(p, f)) {
        auto [x, y] = *v;
        std::string detail = std::string(to_string(p)) + " fails for X=" + format_subset(x, in.labels) +
                             " Y=" + format_subset(y, in.labels) + ": f(X)=" + format_number(f(x)) +
                             " f(Y)=" + format_number(f(y)) + " f(X&Y)=" + format_number(f(x & y)) +
                             " f(X|Y)=" + format_number(f(x | y));
        return report(false, detail, out);
    }
    return report(true, std::string(to_string(p)) + " (" + f.name() + ")", out);
}

int check_tangle(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    auto f = function_of(in, o);
    if (o.core.empty()) {
        throw InputError("check tangle needs --core");
    }
    TangleDescriptor t{order_of(o), parse_core(o.core, in.labels)};
    auto r = verify_tangle(f, t);
    for (const auto& v : r.violations) {
        out << "violation: " << to_string(v.axiom);
        for (auto x : v.witness) {
            out << " " << format_subset(x, in.labels);
        }
        out << "\n";
    }
    if (!r.ok()) {
        return violation;
    }
    return report(true,
                  "tangle of order " + order_text(t.order) + " with core " + format_subset(t.core, in.labels) +
                      " (" + std::to_string(r.family_size) + " sets)",
                  out);
}

int check_duality(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    auto f = function_of(in, o);
    auto r = verify_duality(f);
    auto v = validate_pre_decomposition(r.witness);
    bool witness_ok = v.is_branch_decomposition() && f.level(width(r.witness, f)) == f.level(r.branch_width);
    out << "tn: " << order_text(r.tangle_number) << "\n";
    out << "bw: " << order_text(r.branch_width) << "\n";
    if (!witness_ok) {
        return report(false, "witness decomposition does not realize the branch width", out);
    }
    return report(r.equal, r.equal ? "tn=bw=" + format_number(r.tangle_number.value()) : "tn != bw", out);
}

int check_equivalence(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    if (in.dendogram) {
        const auto& d = *in.dendogram;
        enforce_max_n(o, d.size());
        bool round = psi_inverse(psi(d)) == d;
        bool kappa = dendogram_from_kappa(kappa_from_dendogram(d), d.labels) == d;
        out << "psi round trip: " << (round ? "ok" : "FAILED") << "\n";
        out << "kappa round trip: " << (kappa ? "ok" : "FAILED") << "\n";
        return report(round && kappa, "dendogram equivalences", out);
    }
    if (in.table || in.graph) {
        auto f = function_of(in, o);
        try {
            auto d = dendogram_from_kappa(f, in.labels);
            out << "dendogram with " << d.radii.size() << " steps reproduces f\n";
        } catch (const NotMaxSubmodularError& e) {
            return report(false, e.what(), out);
        }
        return report(true, "function is the maximum linkage of its separation ultrametric", out);
    }
    auto m = metric_of(in, o);
    auto sl = single_linkage(m);
    bool minimax = minimax_ultrametric(m) == psi(sl);
    out << "minimax = psi(single linkage): " << (minimax ? "ok" : "FAILED") << "\n";
    auto f = mind_function(m);
    bool kappa = dendogram_from_kappa(f, m.labels()) == sl;
    out << "dendogram from mind = single linkage: " << (kappa ? "ok" : "FAILED") << "\n";
    auto c = block_tangle_correspondence(m);
    out << "blocks: " << c.blocks.size() << " tangle cores: " << c.catalog.entries.size() << "\n";
    for (const auto& failure : c.failures) {
        out << "  " << failure << "\n";
    }
    out << "blocks = tangles: " << (c.ok() ? "ok" : "FAILED") << "\n";
    return report(minimax && kappa && c.ok(), "cluster/tangle equivalence", out);
}

std::string partition_text(const Partition& p, const std::vector<std::string>& labels) {
    std::string s;
    for (auto b : p.blocks) {
        s += format_subset(b, labels);
    }
    return s;
}

int check_remark(const Options& o, std::ostream& out) {
    auto in = load(o.input, o.format);
    auto m = metric_of(in, o);
    const auto& labels = m.labels();
    bool ok = true;
    if (auto v = single_linkage_identity_violation(m)) {
        ok = false;
        out << "single linkage identity FAILED on " << partition_text(v->partition, labels) << ": "
            << format_number(v->lhs) << " != " << format_number(v->rhs) << "\n";
    } else {
        out << "single linkage identity: holds on all partitions\n";
    }
    auto err = average_linkage_aggregation_error(m);
    out << "average linkage aggregation: max relative error " << format_number(err) << "\n";
    ok = ok && err <= 1e-12;

    if (auto c = complete_linkage_mismatch(m)) {
        out << "complete linkage mismatch on " << partition_text(c->partition, labels) << ": "
            << format_number(c->lhs) << " != " << format_number(c->rhs) << "\n";
    } else {
        out << "complete linkage: no mismatch on this input\n";
    }
    auto phi = make_function(AverageLinkage{m});
    if (m.size() <= kMaxPairSweepN) {
        for (auto p : {SetProperty::submodular, SetProperty::max_submodular}) {
            if (auto v = find_violation(p, phi)) {
                out << "phi-dist " << to_string(p) << " violation: X=" << format_subset(v->first, labels)
                    << " Y=" << format_subset(v->second, labels) << "\n";
            } else {
                out << "phi-dist " << to_string(p) << ": no violation on this input\n";
            }
        }
    }
    // Random search for instances on which phi-dist fails maximum-submodularity.
    Rng rng(o.seed);
    for (int trial = 0; trial < 200; ++trial) {
        auto r = random_integer_metric(rng, 4 + trial % 3);
        if (auto v = find_violation(SetProperty::max_submodular, make_function(AverageLinkage{r}))) {
            out << "phi-dist max-submodular violation on random instance " << trial << " (seed " << o.seed
                << "): X=" << format_subset(v->first) << " Y=" << format_subset(v->second) << "\n";
            break;
        }
    }
    return report(ok, "linkage remark identities", out);
}

int cmd_check(const Options& o, std::ostream& out) {
    const auto& t = o.target;
    if (t == "metric") return check_metric(o, out);
    if (t == "ultrametric") return check_ultrametric(o, out);
    if (t == "axioms") return check_axioms_cmd(o, out);
    if (t == "submodular") return check_property(o, SetProperty::submodular, out);
    if (t == "max-submodular") return check_property(o, SetProperty::max_submodular, out);
    if (t == "tangle") return check_tangle(o, out);
    if (t == "duality") return check_duality(o, out);
    if (t == "equivalence") return check_equivalence(o, out);
    if (t == "remark") return check_remark(o, out);
    throw InputError("unknown check target '" + t + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tangles, branch decompositions and single-linkage clustering", "tangles"};
    app.require_subcommand(1);
    Options o;
    std::optional<std::string> function;

    auto common = [&](CLI::App* sub, bool with_function) {
        sub->add_option("-i,--input", o.input, "Input file");
        sub->add_option("--format", o.format, "Input format")->check(CLI::IsMember(kFormats));
        sub->add_option("-o,--output", o.output, "Output file (default stdout)");
        sub->add_option("--out-format", o.out_format, "Output format")
            ->check(CLI::IsMember({"json", "csv", "dot", "newick"}));
        sub->add_option("--max-n", o.max_n, "Refuse inputs with more elements");
        if (with_function) {
            sub->add_option("--function", function, "mind|kappa-dist|phi-dist|nu|tabulated")
                ->check(CLI::IsMember({"mind", "kappa-dist", "phi-dist", "nu", "tabulated", "phi", "kappa"}));
        }
    };

    auto* cluster = app.add_subcommand("cluster", "Single-linkage dendogram of points or a matrix");
    common(cluster, false);
    cluster->add_option("--tie-eps", o.tie_eps, "Merge radii within this tolerance together");
    auto* ultra = app.add_subcommand("ultrametric", "Minimax ultrametric as matrix CSV");
    common(ultra, false);
    auto* tangles = app.add_subcommand("tangles", "Catalog of all tangles");
    common(tangles, true);
    auto* bw = app.add_subcommand("branch-width", "Exact branch width with a witness decomposition");
    common(bw, true);
    auto* exactify = app.add_subcommand("exactify", "Make a pre-decomposition exact");
    common(exactify, true);
    exactify->add_option("--metric", o.metric, "Points, matrix, graph or tabulated file defining f");
    exactify->add_option("--metric-format", o.metric_format, "Format of --metric")->check(CLI::IsMember(kFormats));
    auto* convert = app.add_subcommand("convert", "Dendogram <-> ultrametric");
    common(convert, false);
    auto* kappa = app.add_subcommand("kappa", "Dendogram -> tabulated function, or function -> dendogram");
    common(kappa, true);
    auto* check = app.add_subcommand("check", "Verify a property; exit 2 with a witness on failure");
    common(check, true);
    check->add_option("target", o.target, "What to check")
        ->required()
        ->check(CLI::IsMember({"metric", "ultrametric", "axioms", "submodular", "max-submodular", "tangle",
                               "duality", "equivalence", "remark"}));
    check->add_option("--core", o.core, "Comma-separated core labels for check tangle");
    check->add_option("--order", o.order, "Order k for check tangle");
    check->add_option("--radius", o.radius, "Order as a radius, k = exp(-r); wins over --order");
    check->add_option("--seed", o.seed, "Seed for randomized searches");

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        auto code = app.exit(e, out, err);
        return code == 0 ? pass : error;
    }
    if (function) {
        o.function = *function;
        o.function_given = true;
    }

    try {
        if (cluster->parsed()) return cmd_cluster(o, out);
        if (ultra->parsed()) return cmd_ultrametric(o, out);
        if (tangles->parsed()) return cmd_tangles(o, out);
        if (bw->parsed()) return cmd_branch_width(o, out);
        if (exactify->parsed()) return cmd_exactify(o, out);
        if (convert->parsed()) return cmd_convert(o, out);
        if (kappa->parsed()) return cmd_kappa(o, out);
        if (check->parsed()) return cmd_check(o, out);
    } catch (const SizeCapError& e) {
        err << "size cap: " << e.what() << "\n";
        return size_cap;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return error;
    }
    return error;
}

}  // namespace tanglekit::cli
