// Acceptance suite: builds a generated corpus plus the hand examples, runs
// every construction algorithm, and checks the correctness and cost-model
// claims end to end. One line per criterion; hard criteria decide the exit
// code, soft ones only report.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <vector>

#include "hublab/bvc_pll.hpp"
#include "hublab/gen.hpp"
#include "hublab/metrics.hpp"
#include "hublab/oracle.hpp"
#include "hublab/pll.hpp"
#include "hublab/vc_pll.hpp"

using namespace hublab;

namespace {

struct Criterion {
    std::string title;
    bool hard = true;
    bool informational = false;
    std::vector<std::string> failures;
    std::string note;

    bool pass() const { return failures.empty(); }
};

std::vector<Criterion> criteria;
int add_criterion(const std::string& title, bool hard, bool informational = false) {
    criteria.push_back({title, hard, informational, {}, ""});
    return static_cast<int>(criteria.size() - 1);
}
void fail(int idx, const std::string& what) {
    criteria[idx].failures.push_back(what);
    if (criteria[idx].failures.size() <= 4)
        std::cout << "    ! " << criteria[idx].title << ": " << what << "\n";
}

struct CorpusGraph {
    std::string name;
    Graph graph;
};

std::vector<CorpusGraph> build_unweighted_corpus() {
    std::vector<CorpusGraph> corpus;
    auto add = [&corpus](const std::string& name, const EdgeList& edges) {
        corpus.push_back({name, build_graph(raw_from_edges(edges))});
    };

    add("hand/p2", {{1, 2}});
    add("hand/p3", gen_path(3));
    add("hand/triangle", {{1, 2}, {2, 3}, {1, 3}});
    add("hand/star12", gen_star(12));
    add("hand/two-components", {{1, 2}, {2, 3}, {10, 11}});
    {
        std::istringstream in("5 5");
        corpus.push_back({"hand/isolated", build_graph(parse_edge_list(in, false, false))});
    }

    struct GnpSpec {
        std::size_t n;
        double p;
    };
    std::vector<GnpSpec> gnp_specs = {{50, 0.04}, {50, 0.12}, {50, 0.3},
                                      {120, 0.02}, {120, 0.05}, {120, 0.12},
                                      {300, 0.007}, {300, 0.02}, {300, 0.05},
                                      {700, 0.003}, {700, 0.009}, {2000, 0.0015}};
    for (std::uint64_t seed : {1, 2, 3})
        for (const GnpSpec& s : gnp_specs) {
            std::ostringstream name;
            name << "gnp/n" << s.n << "/p" << s.p << "/seed" << seed;
            add(name.str(), gen_gnp(s.n, s.p, seed));
        }
    for (std::uint64_t seed : {1, 2}) {
        add("ba/n60/k2/seed" + std::to_string(seed), gen_ba(60, 2, seed));
        add("ba/n200/k3/seed" + std::to_string(seed), gen_ba(200, 3, seed));
        add("ba/n800/k5/seed" + std::to_string(seed), gen_ba(800, 5, seed));
    }
    add("path/50", gen_path(50));
    add("path/400", gen_path(400));
    add("path/2000", gen_path(2000));
    add("star/50", gen_star(50));
    add("star/500", gen_star(500));
    add("grid/7x7", gen_grid(7, 7));
    add("grid/15x20", gen_grid(15, 20));
    add("grid/40x50", gen_grid(40, 50));
    return corpus;
}

constexpr std::uint32_t kBatchSizes[] = {1, 7, 64, 1024};

}  // namespace

int main() {
    auto suite_start = std::chrono::steady_clock::now();

    int c1 = add_criterion("canonical label equality across all algorithms", true);
    int c2 = add_criterion("all-pairs query exactness (undirected, directed, weighted)",
                           true);
    int c3 = add_criterion("batch size 1 reproduces the sequential counters", true);
    int c4 = add_criterion("messages and distance checks equal for every batch size",
                           true);
    int c5 = add_criterion("positive scan cost: batched <= sequential, group formula",
                           true);
    int c6 = add_criterion("negative scan ratio and difference bounds", false);
    int c7 = add_criterion("edge-access reduction, strict under grouped deliveries",
                           true);
    int c8 = add_criterion("arrival waves within one step of the distance", true);
    int c9 = add_criterion("weighted labels equal the pruned Dijkstra labels", true);
    int c10 = add_criterion("labels and counters invariant under thread count", true);
    int c11 = add_criterion("hardware-scale results not reproduced at desk scale",
                            true, true);

    std::vector<CorpusGraph> corpus = build_unweighted_corpus();
    std::cout << "corpus: " << corpus.size() << " unweighted graphs\n";

    double ratio_sum_b1024 = 0, ratio_sum_b7 = 0;
    int gnp_count = 0;
    int bounds_checked = 0, bounds_held = 0;

    auto c1_start = std::chrono::steady_clock::now();
    for (const CorpusGraph& cg : corpus) {
        const Graph& g = cg.graph;
        DistanceMatrix matrix = all_pairs(g);
        LabelStore canonical = canonical_labels_bruteforce(g, matrix);

        std::vector<PllResult> seq;
        std::vector<BvcResult> bvc;
        for (std::uint32_t batch : kBatchSizes) {
            seq.push_back(pll_unweighted(g, batch));
            bvc.push_back(bvcpll(g, {.batch_size = batch}));
        }
        if (seq[0].labels != canonical) fail(c1, cg.name + ": sequential labels");
        for (std::size_t i = 0; i < std::size(kBatchSizes); ++i) {
            std::string tag = cg.name + " B=" + std::to_string(kBatchSizes[i]);
            if (bvc[i].labels != canonical) fail(c1, tag + ": batched labels");
            const CounterReport& s = seq[i].counters;
            const CounterReport& b = bvc[i].counters;
            if (s.messages_sent != b.messages_sent) fail(c4, tag + ": messages");
            if (s.checks_total() != b.checks_total()) fail(c4, tag + ": checks");
            if (b.scan_len_positive > s.scan_len_positive)
                fail(c5, tag + ": positive scan exceeds sequential");
            if (b.scan_pos_inbatch != b.group_formula_inbatch)
                fail(c5, tag + ": in-batch tally vs group formula");
            if (b.edge_accesses > s.edge_accesses)
                fail(c7, tag + ": edge accesses exceed sequential");
            if (b.multi_delta_commits > 0 && b.edge_accesses >= s.edge_accesses)
                fail(c7, tag + ": grouped deliveries but no strict reduction");
        }
        {
            const CounterReport& s = seq[0].counters;
            const CounterReport& b = bvc[0].counters;
            if (s.messages_sent != b.messages_sent ||
                s.checks_positive != b.checks_positive ||
                s.checks_negative != b.checks_negative ||
                s.scan_len_positive != b.scan_len_positive ||
                s.scan_len_negative != b.scan_len_negative ||
                s.edge_accesses != b.edge_accesses)
                fail(c3, cg.name);
        }

        VcPllResult vc = vcpll(g, {.trace = true});
        if (vc.labels != canonical) fail(c1, cg.name + ": vertex-centric labels");
        for (const auto& [key, iters] : vc.trace.arrivals) {
            Rank u = static_cast<Rank>(key / g.n());
            Rank v = static_cast<Rank>(key % g.n());
            Distance d = matrix.at(u, v);
            for (std::uint32_t it : iters)
                if (it != d && it != d + 1) {
                    fail(c8, cg.name + ": arrival at " + std::to_string(it) +
                                 " for distance " + std::to_string(d));
                    break;
                }
        }
        if (vc.counters.iterations > std::uint64_t(matrix.diameter()) + 1)
            fail(c8, cg.name + ": iteration count " +
                         std::to_string(vc.counters.iterations) + " exceeds diameter+1");

        // query exactness over the batched store
        const LabelStore& store = bvc.back().labels;
        bool exact = true;
        for (Rank u = 0; u < g.n() && exact; ++u)
            for (Rank v = 0; v < g.n(); ++v)
                if (store.query_distance(u, v) != matrix.at(u, v)) {
                    exact = false;
                    fail(c2, cg.name + ": query(" + std::to_string(u) + "," +
                                 std::to_string(v) + ")");
                    break;
                }

        if (cg.name.rfind("gnp/", 0) == 0) {
            auto ratio = [](const CounterReport& s, const CounterReport& b) {
                if (b.scan_len_negative == 0) return 1.0;
                return double(s.scan_len_negative) / double(b.scan_len_negative);
            };
            ratio_sum_b1024 += ratio(seq[3].counters, bvc[3].counters);
            ratio_sum_b7 += ratio(seq[1].counters, bvc[1].counters);
            ++gnp_count;

            if (g.n() <= 500) {
                auto report = negative_scan_bounds_report(g, bvc[2].labels, matrix, 64,
                                                          seq[2].counters,
                                                          bvc[2].counters);
                for (const BatchBounds& bb : report) {
                    ++bounds_checked;
                    if (bb.holds)
                        ++bounds_held;
                    else
                        fail(c6, cg.name + " batch " + std::to_string(bb.batch) +
                                     ": difference " +
                                     std::to_string(bb.measured_difference) +
                                     " outside [-" + std::to_string(bb.s_yv) + ", " +
                                     std::to_string(bb.s_xu) + "]");
                }
            }
        }
    }
    double c1_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - c1_start).count();
    criteria[c1].note = std::to_string(corpus.size()) + " graphs, " +
                        std::to_string(std::size(kBatchSizes)) + " batch sizes, " +
                        std::to_string(c1_seconds).substr(0, 5) + " s";

    // group-formula fixture: nine labels arriving as three groups of three
    {
        GroupCosts gc = arrival_group_costs(std::vector<std::uint32_t>{3, 3, 3});
        if (gc.sequential_cost != 36 || gc.batched_cost != 27)
            fail(c5, "group fixture [3,3,3]: expected (36,27), got (" +
                         std::to_string(gc.sequential_cost) + "," +
                         std::to_string(gc.batched_cost) + ")");
    }

    if (gnp_count > 0) {
        double mean_b1024 = ratio_sum_b1024 / gnp_count;
        double mean_b7 = ratio_sum_b7 / gnp_count;
        std::ostringstream note;
        note << "mean ratio seq/bvc: " << mean_b7 << " (B=7), " << mean_b1024
             << " (B=1024); bounds held " << bounds_held << "/" << bounds_checked;
        criteria[c6].note = note.str();
        if (mean_b7 < 0.90 || mean_b7 > 1.10)
            fail(c6, "mean ratio at B=7 outside [0.90, 1.10]: " +
                         std::to_string(mean_b7));
        if (mean_b1024 < 0.90 || mean_b1024 > 1.10)
            fail(c6, "mean ratio at B=1024 outside [0.90, 1.10]: " +
                         std::to_string(mean_b1024) +
                         " (single batch swallows the whole desk-scale graph)");
    }

    // ---- weighted corpus --------------------------------------------------
    {
        std::vector<CorpusGraph> weighted;
        for (std::uint64_t seed : {1, 2}) {
            for (auto [n, p] : std::vector<std::pair<std::size_t, double>>{
                     {50, 0.1}, {120, 0.05}, {300, 0.02}}) {
                auto edges = gen_gnp(n, p, seed);
                auto w = gen_weights(edges.size(), 1, 7, seed);
                std::ostringstream name;
                name << "wgnp/n" << n << "/seed" << seed;
                weighted.push_back({name.str(),
                                    build_graph(raw_from_edges(edges, false, &w))});
            }
            auto edges = gen_ba(100, 3, seed);
            auto w = gen_weights(edges.size(), 1, 7, seed);
            weighted.push_back({"wba/n100/seed" + std::to_string(seed),
                                build_graph(raw_from_edges(edges, false, &w))});
        }
        {
            auto edges = gen_grid(8, 9);
            auto w = gen_weights(edges.size(), 1, 7, 5);
            weighted.push_back({"wgrid/8x9", build_graph(raw_from_edges(edges, false, &w))});
        }
        for (const CorpusGraph& cg : weighted) {
            const Graph& g = cg.graph;
            DistanceMatrix matrix = all_pairs(g);
            PllResult seq = pll_weighted(g);
            if (seq.labels != canonical_labels_bruteforce(g, matrix))
                fail(c9, cg.name + ": sequential labels not canonical");
            for (std::uint32_t batch : {1u, 7u, 64u, 512u}) {
                BvcResult r = bvcpll_weighted(g, {.batch_size = batch});
                if (r.labels != seq.labels)
                    fail(c9, cg.name + " B=" + std::to_string(batch));
            }
            bool exact = true;
            for (Rank u = 0; u < g.n() && exact; ++u)
                for (Rank v = 0; v < g.n(); ++v)
                    if (seq.labels.query_distance(u, v) != matrix.at(u, v)) {
                        exact = false;
                        fail(c2, cg.name + ": weighted query");
                        break;
                    }
        }
        // the dominated-shortcut fixture must trigger at least one removal
        EdgeList tri = {{2, 3}, {1, 2}, {1, 3}};
        std::vector<Weight> tw = {5, 1, 1};
        Graph g = build_graph(raw_from_edges(tri, false, &tw));
        BvcResult r = bvcpll_weighted(g, {.batch_size = 512});
        if (r.counters.recheck_removed < 1)
            fail(c9, "weighted triangle fixture: no recheck removal");
    }

    // ---- directed corpus ---------------------------------------------------
    {
        std::vector<CorpusGraph> directed;
        for (std::uint64_t seed : {1, 2})
            for (auto [n, p] : std::vector<std::pair<std::size_t, double>>{
                     {50, 0.06}, {120, 0.03}, {300, 0.012}}) {
                std::ostringstream name;
                name << "dgnp/n" << n << "/seed" << seed;
                directed.push_back(
                    {name.str(), build_graph(raw_from_edges(gen_gnp(n, p, seed), true))});
            }
        directed.push_back(
            {"hand/chain", build_graph(raw_from_edges({{1, 2}, {2, 3}}, true))});
        directed.push_back(
            {"hand/2cycle", build_graph(raw_from_edges({{1, 2}, {2, 1}}, true))});
        directed.push_back(
            {"hand/diamond",
             build_graph(raw_from_edges({{1, 2}, {1, 3}, {2, 4}, {3, 4}}, true))});
        for (const CorpusGraph& cg : directed) {
            const Graph& g = cg.graph;
            DistanceMatrix matrix = all_pairs(g);
            LabelStore canonical = canonical_labels_bruteforce(g, matrix);
            PllResult seq = pll_directed(g);
            if (seq.labels != canonical)
                fail(c1, cg.name + ": directed sequential labels");
            for (std::uint32_t batch : {1u, 64u, 1024u}) {
                BvcResult r = bvcpll_directed(g, {.batch_size = batch});
                if (r.labels != canonical)
                    fail(c1, cg.name + " B=" + std::to_string(batch) + ": directed labels");
            }
            bool exact = true;
            for (Rank u = 0; u < g.n() && exact; ++u)
                for (Rank v = 0; v < g.n(); ++v)
                    if (seq.labels.query_distance(u, v) != matrix.at(u, v)) {
                        exact = false;
                        fail(c2, cg.name + ": directed query");
                        break;
                    }
        }
    }

    // ---- determinism across thread counts ----------------------------------
    {
        struct DetCase {
            std::string name;
            Graph graph;
            int kind;  // 0 plain, 1 weighted, 2 directed
        };
        std::vector<DetCase> cases;
        for (std::uint64_t seed : {1, 2, 3, 4})
            cases.push_back({"det/gnp300/seed" + std::to_string(seed),
                             build_graph(raw_from_edges(gen_gnp(300, 0.02, seed))), 0});
        cases.push_back({"det/ba200", build_graph(raw_from_edges(gen_ba(200, 3, 9))), 0});
        cases.push_back({"det/grid15x20", build_graph(raw_from_edges(gen_grid(15, 20))), 0});
        cases.push_back({"det/path400", build_graph(raw_from_edges(gen_path(400))), 0});
        cases.push_back({"det/star500", build_graph(raw_from_edges(gen_star(500))), 0});
        {
            auto edges = gen_gnp(120, 0.05, 5);
            auto w = gen_weights(edges.size(), 1, 7, 5);
            cases.push_back({"det/wgnp120",
                             build_graph(raw_from_edges(edges, false, &w)), 1});
            cases.push_back({"det/dgnp120",
                             build_graph(raw_from_edges(edges, true)), 2});
        }
        for (const DetCase& dc : cases) {
            auto run = [&](unsigned threads) {
                BvcOptions opt{.batch_size = 64, .threads = threads};
                switch (dc.kind) {
                    case 1: return bvcpll_weighted(dc.graph, opt);
                    case 2: return bvcpll_directed(dc.graph, opt);
                    default: return bvcpll(dc.graph, opt);
                }
            };
            BvcResult base = run(1);
            for (unsigned threads : {2u, 4u, 8u}) {
                BvcResult r = run(threads);
                if (r.labels != base.labels)
                    fail(c10, dc.name + " T=" + std::to_string(threads) + ": labels");
                if (!r.counters.equal_counts(base.counters))
                    fail(c10, dc.name + " T=" + std::to_string(threads) + ": counters");
            }
        }
        criteria[c10].note = std::to_string(cases.size()) + " graphs, threads 1/2/4/8";
    }

    criteria[c11].note =
        "absolute runtimes, speedup tables, cache statistics, and external-system "
        "comparisons are hardware results; the counter-level equivalents above "
        "stand in for them";

    // ---- report -------------------------------------------------------------
    double total_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - suite_start).count();
    bool all_hard_pass = true;
    std::cout << "\n";
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        const char* status = c.informational ? "INFO"
                             : c.pass()      ? "PASS"
                             : c.hard        ? "FAIL"
                                             : "WARN";
        if (c.hard && !c.informational && !c.pass()) all_hard_pass = false;
        std::cout << "[" << status << "] " << (i + 1) << ". " << c.title;
        if (!c.note.empty()) std::cout << " — " << c.note;
        if (!c.pass() && !c.informational)
            std::cout << " — " << c.failures.size() << " failure(s)";
        std::cout << "\n";
    }
    std::cout << "\ntotal: " << total_seconds << " s\n";
    std::cout << (all_hard_pass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << "\n";
    return all_hard_pass ? 0 : 1;
}
