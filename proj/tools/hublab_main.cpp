// hublab command line: build hub labels, answer distance queries, verify
// against the brute-force oracle, and compare construction cost counters.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hublab/bvc_pll.hpp"
#include "hublab/gen.hpp"
#include "hublab/graph.hpp"
#include "hublab/label_store.hpp"
#include "hublab/metrics.hpp"
#include "hublab/oracle.hpp"
#include "hublab/pll.hpp"
#include "hublab/vc_pll.hpp"

namespace {

using namespace hublab;

int usage_error(const std::string& msg) {
    std::cerr << "usage error: " << msg << "\n";
    return 2;
}

Graph load_graph(const std::string& path, bool directed, bool weighted) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    RawGraph raw = parse_edge_list(in, directed, weighted);
    return build_graph(raw);
}

struct ConstructArgs {
    std::string input, output, counters_path, algo = "bvc-pll", order = "degree";
    bool directed = false, weighted = false;
    std::optional<std::uint32_t> batch_size;
    std::optional<unsigned> threads;
};

int cmd_construct(const ConstructArgs& a) {
    if (a.order != "degree") return usage_error("only --order degree is supported");
    if (a.batch_size && a.algo != "bvc-pll")
        return usage_error("--batch-size only applies to --algo bvc-pll");
    if (a.threads && a.algo == "pll")
        return usage_error("--threads does not apply to --algo pll");
    if (a.algo == "vc-pll" && (a.directed || a.weighted))
        return usage_error("vc-pll supports undirected unweighted graphs only");
    if (a.batch_size && *a.batch_size == 0)
        return usage_error("--batch-size must be >= 1");

    Graph g = load_graph(a.input, a.directed, a.weighted);
    std::uint32_t batch = a.batch_size.value_or(a.weighted ? 512 : 1024);
    unsigned threads = a.threads.value_or(1);

    LabelStore labels;
    CounterReport counters;
    auto t0 = std::chrono::steady_clock::now();
    if (a.algo == "pll") {
        PllResult r = a.directed ? pll_directed(g)
                      : a.weighted ? pll_weighted(g)
                                   : pll_unweighted(g);
        labels = std::move(r.labels);
        counters = std::move(r.counters);
    } else if (a.algo == "vc-pll") {
        VcPllResult r = vcpll(g, {.threads = threads});
        labels = std::move(r.labels);
        counters = std::move(r.counters);
    } else if (a.algo == "bvc-pll") {
        BvcOptions opt{batch, threads};
        BvcResult r = a.directed ? bvcpll_directed(g, opt)
                      : a.weighted ? bvcpll_weighted(g, opt)
                                   : bvcpll(g, opt);
        labels = std::move(r.labels);
        counters = std::move(r.counters);
    } else {
        return usage_error("unknown algorithm " + a.algo);
    }
    counters.wall_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();

    labels.save(a.output);
    counters.print(std::cout);
    if (!a.counters_path.empty()) {
        std::ofstream cf(a.counters_path);
        if (!cf) throw std::runtime_error("cannot open " + a.counters_path);
        cf << counters.to_tsv();
    }
    std::cout << "labels written to " << a.output << "\n";
    return 0;
}

int cmd_query(const std::string& labels_path, const std::string& graph_path) {
    LabelStore store = LabelStore::load(labels_path);

    // With a graph we translate original ids through the degree order;
    // without one, queries address ranks directly.
    std::optional<VertexOrder> order;
    if (!graph_path.empty()) {
        std::ifstream in(graph_path);
        if (!in) throw std::runtime_error("cannot open " + graph_path);
        RawGraph raw = parse_edge_list(in, store.directed(), store.weighted());
        order = degree_order(raw);
        if (order->size() != store.n())
            throw std::runtime_error("graph has " + std::to_string(order->size()) +
                                     " vertices but labels have " +
                                     std::to_string(store.n()));
    }
    auto to_rank = [&](long long id) -> Rank {
        if (id < 0) throw std::runtime_error("unknown vertex id " + std::to_string(id));
        if (order) {
            auto it = order->rank_of.find(static_cast<VertexId>(id));
            if (it == order->rank_of.end())
                throw std::runtime_error("unknown vertex id " + std::to_string(id));
            return it->second;
        }
        if (static_cast<std::uint64_t>(id) >= store.n())
            throw std::runtime_error("unknown vertex id " + std::to_string(id));
        return static_cast<Rank>(id);
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(std::cin, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u >> v)) throw ParseError(lineno, "expected two vertex ids");
        Distance d = store.query_distance(to_rank(u), to_rank(v));
        if (d == kInfDistance)
            std::cout << "INF\n";
        else
            std::cout << d << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& labels_path) {
    LabelStore store = LabelStore::load(labels_path);
    Graph g = load_graph(graph_path, store.directed(), store.weighted());
    VerifyReport report = verify_store(store, g);
    std::cout << "query exactness:    " << (report.query_exact ? "pass" : "FAIL") << "\n";
    std::cout << "canonical equality: " << (report.canonical_equal ? "pass" : "FAIL")
              << "\n";
    for (const std::string& f : report.failures) std::cout << "  " << f << "\n";
    return report.pass() ? 0 : 1;
}

int cmd_compare(const std::string& graph_path, bool weighted, std::uint32_t batch,
                unsigned threads, double band) {
    Graph g = load_graph(graph_path, false, weighted);
    if (!weighted) {
        PllResult seq = pll_unweighted(g, batch);
        BvcResult bvc = bvcpll(g, {batch, threads});
        CompareVerdicts v = compare(seq.counters, bvc.counters, band);
        ClaimVerdict labels_equal{"labels equal", true, seq.labels == bvc.labels, 0, 0, ""};
        v.claims.insert(v.claims.begin(), labels_equal);
        v.print(std::cout);
        return v.hard_pass() ? 0 : 1;
    }
    PllResult seq = pll_weighted(g);
    BvcResult bvc = bvcpll_weighted(g, {batch, threads});
    bool equal = seq.labels == bvc.labels;
    std::cout << (equal ? "[pass] " : "[FAIL] ")
              << "weighted labels equal sequential construction\n";
    std::cout << "sequential counters:\n";
    seq.counters.print(std::cout);
    std::cout << "batched counters (recheck removed " << bvc.counters.recheck_removed
              << "):\n";
    bvc.counters.print(std::cout);
    return equal ? 0 : 1;
}

struct GenArgs {
    std::string model, output;
    std::size_t n = 0, attach = 2, rows = 0, cols = 0;
    double p = 0.05;
    std::uint64_t seed = 1;
    bool weighted = false;
    Weight wmin = 1, wmax = 7;
};

int cmd_gen(const GenArgs& a) {
    EdgeList edges;
    if (a.model == "path") {
        edges = gen_path(a.n);
    } else if (a.model == "star") {
        edges = gen_star(a.n);
    } else if (a.model == "grid") {
        edges = gen_grid(a.rows, a.cols);
    } else if (a.model == "gnp") {
        edges = gen_gnp(a.n, a.p, a.seed);
    } else if (a.model == "ba") {
        edges = gen_ba(a.n, a.attach, a.seed);
    } else {
        return usage_error("unknown model " + a.model);
    }
    std::vector<Weight> weights;
    if (a.weighted) weights = gen_weights(edges.size(), a.wmin, a.wmax, a.seed);

    if (a.output.empty()) {
        write_edge_list(std::cout, edges, a.weighted ? &weights : nullptr);
    } else {
        std::ofstream out(a.output);
        if (!out) throw std::runtime_error("cannot open " + a.output);
        write_edge_list(out, edges, a.weighted ? &weights : nullptr);
    }
    return 0;
}

int cmd_stats(const std::string& labels_path) {
    LabelStore store = LabelStore::load(labels_path);
    LabelStore::Stats s = store.stats();
    std::cout << "n                = " << s.n << "\n"
              << "directed         = " << (store.directed() ? "yes" : "no") << "\n"
              << "weighted         = " << (store.weighted() ? "yes" : "no") << "\n"
              << "total entries    = " << s.total_entries << "\n"
              << "mean label size  = " << s.mean_label_size << "\n"
              << "max label size   = " << s.max_label_size << "\n";
    return 0;
}

int cmd_bench(const std::string& input, const std::string& algo, bool directed,
              bool weighted, std::uint32_t batch, unsigned threads) {
    Graph g = load_graph(input, directed, weighted);
    auto t0 = std::chrono::steady_clock::now();
    PhaseTimes phases;
    CounterReport counters;
    if (algo == "bvc-pll") {
        BvcOptions opt{batch, threads};
        BvcResult r = directed ? bvcpll_directed(g, opt)
                      : weighted ? bvcpll_weighted(g, opt)
                                 : bvcpll(g, opt);
        phases = r.phases;
        counters = std::move(r.counters);
    } else if (algo == "pll") {
        PllResult r = directed ? pll_directed(g)
                      : weighted ? pll_weighted(g)
                                 : pll_unweighted(g);
        counters = std::move(r.counters);
    } else if (algo == "vc-pll") {
        VcPllResult r = vcpll(g, {.threads = threads});
        counters = std::move(r.counters);
    } else {
        return usage_error("unknown algorithm " + algo);
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    std::cout << "wall          = " << wall << " s\n";
    if (algo == "bvc-pll") {
        std::cout << "scatter       = " << phases.scatter_seconds << " s\n"
                  << "gather-check  = " << phases.gather_seconds << " s\n"
                  << "commit        = " << phases.commit_seconds << " s\n";
    }
    counters.print(std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hub labeling toolkit: exact shortest-path distance oracles"};
    app.require_subcommand(1);

    ConstructArgs ca;
    CLI::App* construct = app.add_subcommand("construct", "build hub labels");
    construct->add_option("--input", ca.input, "edge-list file")->required();
    construct->add_option("--output", ca.output, "label file to write")->required();
    construct->add_option("--algo", ca.algo, "pll | vc-pll | bvc-pll")
        ->check(CLI::IsMember({"pll", "vc-pll", "bvc-pll"}));
    construct->add_flag("--directed", ca.directed, "treat edges as directed");
    construct->add_flag("--weighted", ca.weighted, "third column is the edge weight");
    std::uint32_t batch_opt = 0;
    unsigned threads_opt = 0;
    CLI::Option* bo = construct->add_option("--batch-size", batch_opt,
                                            "batch size (bvc-pll only)");
    CLI::Option* to = construct->add_option("--threads", threads_opt, "worker threads");
    construct->add_option("--order", ca.order, "vertex order policy (degree)");
    construct->add_option("--counters", ca.counters_path, "also write counters as TSV");

    std::string q_labels, q_graph;
    CLI::App* query = app.add_subcommand("query", "answer distance queries from stdin");
    query->add_option("--labels", q_labels, "label file")->required();
    query->add_option("--graph", q_graph,
                      "edge-list file; translates original vertex ids");

    std::string v_graph, v_labels;
    CLI::App* verify = app.add_subcommand("verify", "check labels against the oracle");
    verify->add_option("--graph", v_graph, "edge-list file")->required();
    verify->add_option("--labels", v_labels, "label file")->required();

    std::string c_graph;
    bool c_weighted = false;
    std::uint32_t c_batch = 0;
    unsigned c_threads = 1;
    double c_band = 0.10;
    CLI::App* cmp = app.add_subcommand("compare",
                                       "run sequential and batched construction, "
                                       "compare counters");
    cmp->add_option("--graph", c_graph, "edge-list file")->required();
    cmp->add_flag("--weighted", c_weighted, "weighted input");
    cmp->add_option("--batch-size", c_batch, "batch size (default 1024, 512 weighted)");
    cmp->add_option("--threads", c_threads, "worker threads for the batched run");
    cmp->add_option("--ratio-band", c_band, "allowed |ratio-1| for the soft claim");

    GenArgs ga;
    CLI::App* gen = app.add_subcommand("gen", "generate a test graph");
    gen->add_option("--model", ga.model, "gnp | ba | path | star | grid")->required();
    gen->add_option("--n", ga.n, "vertex count");
    gen->add_option("--p", ga.p, "edge probability (gnp)");
    gen->add_option("--attach", ga.attach, "edges per new vertex (ba)");
    gen->add_option("--rows", ga.rows, "grid rows");
    gen->add_option("--cols", ga.cols, "grid cols");
    gen->add_option("--seed", ga.seed, "random seed");
    gen->add_flag("--weighted", ga.weighted, "append uniform weights");
    gen->add_option("--wmin", ga.wmin, "minimum weight");
    gen->add_option("--wmax", ga.wmax, "maximum weight");
    gen->add_option("--output", ga.output, "output file (stdout when omitted)");

    std::string s_labels;
    CLI::App* stats = app.add_subcommand("stats", "label-size statistics");
    stats->add_option("--labels", s_labels, "label file")->required();

    std::string b_input, b_algo = "bvc-pll";
    bool b_directed = false, b_weighted = false;
    std::uint32_t b_batch = 0;
    unsigned b_threads = 1;
    CLI::App* bench = app.add_subcommand("bench", "construction with phase timings");
    bench->add_option("--input", b_input, "edge-list file")->required();
    bench->add_option("--algo", b_algo, "pll | vc-pll | bvc-pll");
    bench->add_flag("--directed", b_directed, "directed input");
    bench->add_flag("--weighted", b_weighted, "weighted input");
    bench->add_option("--batch-size", b_batch, "batch size");
    bench->add_option("--threads", b_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (construct->parsed()) {
            if (*bo) ca.batch_size = batch_opt;
            if (*to) ca.threads = threads_opt;
            return cmd_construct(ca);
        }
        if (query->parsed()) return cmd_query(q_labels, q_graph);
        if (verify->parsed()) return cmd_verify(v_graph, v_labels);
        if (cmp->parsed())
            return cmd_compare(c_graph, c_weighted,
                               c_batch ? c_batch : (c_weighted ? 512 : 1024), c_threads,
                               c_band);
        if (gen->parsed()) return cmd_gen(ga);
        if (stats->parsed()) return cmd_stats(s_labels);
        if (bench->parsed())
            return cmd_bench(b_input, b_algo, b_directed, b_weighted,
                             b_batch ? b_batch : (b_weighted ? 512 : 1024), b_threads);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
