#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hublab/bvc_pll.hpp"
#include "hublab/distance_check.hpp"
#include "hublab/gen.hpp"
#include "hublab/metrics.hpp"
#include "hublab/oracle.hpp"
#include "hublab/pll.hpp"

using namespace hublab;

TEST_CASE("distance check accepts exactly when no witness covers the arrival") {
    HubIndex index(8);
    std::vector<HubEntry> target{{3, 1}};
    SECTION("witness at equal total rejects") {
        index.set(3, 1);
        CheckOutcome out = batch_distance_check(target, index.data(), 2);
        CHECK_FALSE(out.accept);
        CHECK(out.scanned == 1);
    }
    SECTION("strictly longer witness accepts") {
        index.set(3, 2);
        CheckOutcome out = batch_distance_check(target, index.data(), 2);
        CHECK(out.accept);
        CHECK(out.scanned == 1);
    }
    SECTION("empty target list accepts vacuously") {
        CheckOutcome out = batch_distance_check({}, index.data(), 5);
        CHECK(out.accept);
        CHECK(out.scanned == 0);
    }
}

TEST_CASE("path labels at a large batch size") {
    Graph g = build_graph(raw_from_edges(gen_path(3)));
    BvcResult r = bvcpll(g, {.batch_size = 1024});
    CHECK(r.labels == pll_unweighted(g).labels);
}

TEST_CASE("batch size one reproduces the sequential counters exactly") {
    EdgeList tri = {{1, 2}, {2, 3}, {1, 3}};
    Graph g = build_graph(raw_from_edges(tri));
    PllResult seq = pll_unweighted(g, 1);
    BvcResult r = bvcpll(g, {.batch_size = 1});
    CHECK(r.labels == seq.labels);
    CHECK(r.counters.messages_sent == seq.counters.messages_sent);
    CHECK(r.counters.edge_accesses == seq.counters.edge_accesses);
    CHECK(r.counters.checks_positive == seq.counters.checks_positive);
    CHECK(r.counters.checks_negative == seq.counters.checks_negative);
    CHECK(r.counters.scan_len_positive == seq.counters.scan_len_positive);
    CHECK(r.counters.scan_len_negative == seq.counters.scan_len_negative);
}

TEST_CASE("empty graph runs zero batches") {
    RawGraph raw;
    Graph g = build_graph(raw);
    BvcResult r = bvcpll(g);
    CHECK(r.labels.n() == 0);
    CHECK(r.counters.iterations == 0);
    CHECK(r.counters.messages_sent == 0);
}

TEST_CASE("input validation") {
    EdgeList e = {{1, 2}};
    std::vector<Weight> w = {2};
    Graph g = build_graph(raw_from_edges(e));
    CHECK_THROWS_AS(bvcpll(g, {.batch_size = 0}), std::invalid_argument);
    CHECK_THROWS_AS(bvcpll(build_graph(raw_from_edges(e, false, &w)), {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bvcpll(build_graph(raw_from_edges(e, true)), {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bvcpll_directed(g, {}), std::invalid_argument);
    CHECK_THROWS_AS(bvcpll_weighted(build_graph(raw_from_edges(e, true)), {}),
                    std::invalid_argument);
}

TEST_CASE("labels are canonical for every batch size and thread count") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 4; ++round) {
        Graph g = build_graph(raw_from_edges(gen_gnp(45, 0.1, rng())));
        LabelStore canonical = canonical_labels_bruteforce(g);
        for (std::uint32_t batch : {1u, 7u, 64u, 1024u})
            for (unsigned threads : {1u, 4u}) {
                BvcResult r = bvcpll(g, {.batch_size = batch, .threads = threads});
                CHECK(r.labels == canonical);
            }
    }
}

TEST_CASE("messages and checks match the sequential run for every batch size") {
    std::mt19937_64 rng(37);
    for (int round = 0; round < 4; ++round) {
        Graph g = build_graph(raw_from_edges(gen_gnp(60, 0.07, rng())));
        for (std::uint32_t batch : {1u, 7u, 64u}) {
            PllResult seq = pll_unweighted(g, batch);
            BvcResult r = bvcpll(g, {.batch_size = batch});
            CHECK(r.counters.messages_sent == seq.counters.messages_sent);
            CHECK(r.counters.checks_total() == seq.counters.checks_total());
            CHECK(r.counters.scan_len_positive <= seq.counters.scan_len_positive);
            CHECK(r.counters.edge_accesses <= seq.counters.edge_accesses);
            CHECK(r.counters.scan_pos_inbatch == r.counters.group_formula_inbatch);
        }
    }
}

TEST_CASE("grouped deliveries reduce edge accesses strictly") {
    Graph g = build_graph(raw_from_edges(gen_gnp(80, 0.08, 41)));
    PllResult seq = pll_unweighted(g);
    BvcResult r = bvcpll(g, {.batch_size = 1024});
    REQUIRE(r.counters.multi_delta_commits > 0);
    CHECK(r.counters.edge_accesses < seq.counters.edge_accesses);
}

TEST_CASE("directed chain and cycle") {
    EdgeList chain = {{1, 2}, {2, 3}};
    Graph g = build_graph(raw_from_edges(chain, true));
    BvcResult r = bvcpll_directed(g, {.batch_size = 1024});
    Rank a = g.order().rank(1), c = g.order().rank(3);
    CHECK(r.labels.query_distance(a, c) == 2);
    CHECK(r.labels.query_distance(c, a) == kInfDistance);

    EdgeList cyc = {{1, 2}, {2, 1}};
    Graph g2 = build_graph(raw_from_edges(cyc, true));
    CHECK(bvcpll_directed(g2, {.batch_size = 7}).labels == pll_directed(g2).labels);
}

TEST_CASE("diamond keeps the source as an in-hub of the sink") {
    EdgeList diamond = {{1, 2}, {1, 3}, {2, 4}, {3, 4}};
    Graph g = build_graph(raw_from_edges(diamond, true));  // vertex 1 ranks first
    REQUIRE(g.order().rank(1) == 0);
    BvcResult r = bvcpll_directed(g, {.batch_size = 1024});
    auto lin = r.labels.labels(g.order().rank(4), Side::In);
    CHECK(std::find(lin.begin(), lin.end(), HubEntry{0, 2}) != lin.end());
    CHECK(r.labels == pll_directed(g).labels);
}

TEST_CASE("weighted triangle: the dominated tentative entry is removed") {
    // u-v:5, u-w:1, w-v:1; degree order ranks w first via id tie-break
    EdgeList tri = {{2, 3}, {1, 2}, {1, 3}};
    std::vector<Weight> w = {5, 1, 1};
    Graph g = build_graph(raw_from_edges(tri, false, &w));
    REQUIRE(g.order().rank(1) == 0);  // w
    BvcResult r = bvcpll_weighted(g, {.batch_size = 512});
    CHECK(r.counters.recheck_removed == 1);
    CHECK(r.labels == pll_weighted(g).labels);
}

TEST_CASE("weighted shortcut is replaced by the improving path") {
    // direct u-v:5 against u-x:1, x-v:1 with x ranked below v
    EdgeList e = {{1, 2}, {1, 3}, {3, 2}};
    std::vector<Weight> w = {5, 1, 1};
    Graph g = build_graph(raw_from_edges(e, false, &w));
    BvcResult r = bvcpll_weighted(g, {.batch_size = 512});
    Rank u = g.order().rank(1), v = g.order().rank(2);
    CHECK(r.labels.query_distance(u, v) == 2);
    CHECK(r.labels == pll_weighted(g).labels);
}

TEST_CASE("weighted labels equal the pruned Dijkstra labels") {
    std::mt19937_64 rng(43);
    for (int round = 0; round < 4; ++round) {
        auto edges = gen_gnp(40, 0.12, rng());
        auto w = gen_weights(edges.size(), 1, 7, rng());
        Graph g = build_graph(raw_from_edges(edges, false, &w));
        PllResult seq = pll_weighted(g);
        for (std::uint32_t batch : {1u, 7u, 512u}) {
            BvcResult r = bvcpll_weighted(g, {.batch_size = batch});
            CHECK(r.labels == seq.labels);
        }
    }
}

TEST_CASE("directed weighted graphs combine both extensions") {
    std::mt19937_64 rng(59);
    for (int round = 0; round < 3; ++round) {
        auto edges = gen_gnp(35, 0.12, rng());
        auto w = gen_weights(edges.size(), 1, 7, rng());
        Graph g = build_graph(raw_from_edges(edges, true, &w));
        LabelStore canonical = canonical_labels_bruteforce(g);
        CHECK(pll_directed(g).labels == canonical);
        for (std::uint32_t batch : {1u, 16u, 512u})
            CHECK(bvcpll_directed(g, {.batch_size = batch}).labels == canonical);
    }
}

TEST_CASE("unit weights through the weighted path reproduce the plain run") {
    Graph g = build_graph(raw_from_edges(gen_gnp(40, 0.1, 47)));
    BvcResult plain = bvcpll(g, {.batch_size = 64});
    BvcResult viaw = bvcpll_weighted(g, {.batch_size = 64});
    CHECK(viaw.labels == plain.labels);
    CHECK(viaw.counters.recheck_removed == 0);
}

TEST_CASE("after each finished batch, covered pairs already query exactly") {
    // entries of finished batches are final, so the store restricted to hubs
    // below the batch boundary is the exact mid-run state: no distance is
    // ever underestimated and every pair whose canonical hub is processed
    // answers exactly
    auto edges = gen_gnp(30, 0.15, 49);
    auto w = gen_weights(edges.size(), 1, 7, 49);
    Graph g = build_graph(raw_from_edges(edges, false, &w));
    DistanceMatrix m = all_pairs(g);
    std::uint32_t batch = 8;
    BvcResult r = bvcpll_weighted(g, {.batch_size = batch});
    for (Rank done = batch; done < g.n() + batch; done += batch) {
        LabelStore partial(g.n(), false, true);
        for (Rank v = 0; v < g.n(); ++v) {
            std::vector<HubEntry> keep;
            for (const HubEntry& e : r.labels.labels(v))
                if (e.hub < done) keep.push_back(e);
            partial.mutable_labels(v) = std::move(keep);
        }
        for (Rank a = 0; a < g.n(); ++a)
            for (Rank b = 0; b < g.n(); ++b) {
                Distance got = partial.query_distance(a, b);
                Distance want = m.at(a, b);
                if (got != kInfDistance) CHECK(got >= want);
                // the canonical hub of (a, b) is the highest-priority vertex
                // on a shortest path; once its batch is done the pair is exact
                Distance exact_via = r.labels.query_distance(a, b);
                bool covered = false;
                for (const HubEntry& ea : r.labels.labels(a))
                    for (const HubEntry& eb : r.labels.labels(b))
                        if (ea.hub == eb.hub && ea.hub < done &&
                            DistanceSum(ea.dist) + eb.dist == want)
                            covered = true;
                if (covered) CHECK(got == want);
                CHECK(exact_via == want);
            }
    }
}

TEST_CASE("thread count never changes results or counters") {
    Graph g = build_graph(raw_from_edges(gen_gnp(150, 0.04, 53)));
    BvcResult base = bvcpll(g, {.batch_size = 32, .threads = 1});
    for (unsigned threads : {2u, 8u}) {
        BvcResult r = bvcpll(g, {.batch_size = 32, .threads = threads});
        CHECK(r.labels == base.labels);
        CHECK(r.counters.equal_counts(base.counters));
    }
}
