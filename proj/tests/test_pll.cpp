#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "hublab/gen.hpp"
#include "hublab/oracle.hpp"
#include "hublab/pll.hpp"

using namespace hublab;

namespace {

std::vector<HubEntry> list(const LabelStore& s, Rank v, Side side = Side::Out) {
    auto span = s.labels(v, side);
    return {span.begin(), span.end()};
}

}  // namespace

TEST_CASE("path labels") {
    Graph g = build_graph(raw_from_edges(gen_path(3)));  // order [2,1,3]
    PllResult r = pll_unweighted(g);
    CHECK(list(r.labels, 0) == std::vector<HubEntry>{{0, 0}});
    CHECK(list(r.labels, 1) == std::vector<HubEntry>{{0, 1}, {1, 0}});
    CHECK(list(r.labels, 2) == std::vector<HubEntry>{{0, 1}, {2, 0}});
}

TEST_CASE("triangle labels") {
    EdgeList tri = {{1, 2}, {2, 3}, {1, 3}};
    Graph g = build_graph(raw_from_edges(tri));  // order [1,2,3] by id tie-break
    PllResult r = pll_unweighted(g);
    CHECK(list(r.labels, 0) == std::vector<HubEntry>{{0, 0}});
    CHECK(list(r.labels, 1) == std::vector<HubEntry>{{0, 1}, {1, 0}});
    CHECK(list(r.labels, 2) == std::vector<HubEntry>{{0, 1}, {1, 1}, {2, 0}});
}

TEST_CASE("single vertex keeps only its self label") {
    std::istringstream in("7 7");  // a self-loop introduces the vertex, then drops
    Graph g = build_graph(parse_edge_list(in, false, false));
    PllResult r = pll_unweighted(g);
    REQUIRE(g.n() == 1);
    CHECK(list(r.labels, 0) == std::vector<HubEntry>{{0, 0}});
}

TEST_CASE("unweighted rejects wrong inputs") {
    EdgeList e = {{1, 2}};
    std::vector<Weight> w = {2};
    CHECK_THROWS_AS(pll_unweighted(build_graph(raw_from_edges(e, false, &w))),
                    std::invalid_argument);
    CHECK_THROWS_AS(pll_unweighted(build_graph(raw_from_edges(e, true))),
                    std::invalid_argument);
}

TEST_CASE("weighted path labels") {
    EdgeList e = {{1, 2}, {2, 3}};
    std::vector<Weight> w = {5, 1};
    Graph g = build_graph(raw_from_edges(e, false, &w));  // order [2,1,3]
    PllResult r = pll_weighted(g);
    CHECK(list(r.labels, 0) == std::vector<HubEntry>{{0, 0}});
    CHECK(list(r.labels, 1) == std::vector<HubEntry>{{0, 5}, {1, 0}});
    CHECK(list(r.labels, 2) == std::vector<HubEntry>{{0, 1}, {2, 0}});
}

TEST_CASE("unit weights reproduce the unweighted labels") {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 8; ++round) {
        Graph g = build_graph(raw_from_edges(gen_gnp(30, 0.15, rng())));
        CHECK(pll_weighted(g).labels == pll_unweighted(g).labels);
    }
}

TEST_CASE("weighted triangle with an explicit order") {
    // u-v:5, u-w:1, w-v:1 with w ranked first: w is the canonical hub of (u,v)
    EdgeList e = {{1, 2}, {1, 3}, {3, 2}};
    std::vector<Weight> w = {5, 1, 1};
    RawGraph raw = raw_from_edges(e, false, &w);
    VertexOrder order;
    order.id_of = {3, 1, 2};
    order.rank_of = {{3, 0}, {1, 1}, {2, 2}};
    Graph g = build_graph(raw, order);
    PllResult r = pll_weighted(g);
    CHECK(r.labels == canonical_labels_bruteforce(g));
    // vertex 2 (rank 2) is covered by hub w=3 (rank 0), not by vertex 1
    CHECK(list(r.labels, 2) == std::vector<HubEntry>{{0, 1}, {2, 0}});
}

TEST_CASE("directed two-cycle") {
    EdgeList e = {{1, 2}, {2, 1}};
    Graph g = build_graph(raw_from_edges(e, true));  // order [1,2] by id tie-break
    PllResult r = pll_directed(g);
    CHECK(list(r.labels, 0, Side::In) == std::vector<HubEntry>{{0, 0}});
    CHECK(list(r.labels, 0, Side::Out) == std::vector<HubEntry>{{0, 0}});
    CHECK(list(r.labels, 1, Side::In) == std::vector<HubEntry>{{0, 1}, {1, 0}});
    CHECK(list(r.labels, 1, Side::Out) == std::vector<HubEntry>{{0, 1}, {1, 0}});
}

TEST_CASE("directed chain queries through the middle hub") {
    EdgeList e = {{1, 2}, {2, 3}};
    Graph g = build_graph(raw_from_edges(e, true));  // order [2,1,3]
    PllResult r = pll_directed(g);
    Rank a = g.order().rank(1), c = g.order().rank(3);
    CHECK(r.labels.query_distance(a, c) == 2);
    CHECK(r.labels.query_distance(c, a) == kInfDistance);
}

TEST_CASE("edgeless directed graph has only self labels") {
    std::istringstream in("1 1\n2 2");
    Graph g = build_graph(parse_edge_list(in, true, false));
    PllResult r = pll_directed(g);
    for (Rank v = 0; v < g.n(); ++v) {
        CHECK(list(r.labels, v, Side::In) == std::vector<HubEntry>{{v, 0}});
        CHECK(list(r.labels, v, Side::Out) == std::vector<HubEntry>{{v, 0}});
    }
}

TEST_CASE("labels equal the brute-force canonical labeling") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 10; ++round) {
        auto edges = gen_gnp(40, 0.1, rng());
        CHECK(pll_unweighted(build_graph(raw_from_edges(edges))).labels ==
              canonical_labels_bruteforce(build_graph(raw_from_edges(edges))));
        auto w = gen_weights(edges.size(), 1, 7, rng());
        Graph gw = build_graph(raw_from_edges(edges, false, &w));
        CHECK(pll_weighted(gw).labels == canonical_labels_bruteforce(gw));
        Graph gd = build_graph(raw_from_edges(edges, true));
        CHECK(pll_directed(gd).labels == canonical_labels_bruteforce(gd));
    }
}

TEST_CASE("counter identities") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 6; ++round) {
        Graph g = build_graph(raw_from_edges(gen_gnp(50, 0.08, rng())));
        PllResult r = pll_unweighted(g);
        // one edge access per push, one check per pop
        CHECK(r.counters.edge_accesses == r.counters.messages_sent);
        CHECK(r.counters.checks_total() == r.counters.messages_sent);
        // every accepted check appends exactly one non-self entry
        std::uint64_t non_self = r.labels.stats().total_entries - g.n();
        CHECK(r.counters.checks_positive == non_self);

        Graph gd = build_graph(raw_from_edges(gen_gnp(50, 0.08, rng()), true));
        PllResult rd = pll_directed(gd);
        CHECK(rd.counters.edge_accesses == rd.counters.messages_sent);
    }
}
