#pragma once

#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hublab/graph.hpp"
#include "hublab/label_store.hpp"
#include "hublab/types.hpp"

namespace hublab {

// Independent brute-force ground truth at desk scale: all-pairs distances and
// the canonical hub labeling computed straight from the definition. Guarded
// to keep the n x n matrix affordable.

inline constexpr std::size_t kOracleMaxVertices = 20000;
inline constexpr std::size_t kOracleMaxEdges = 1000000;

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, bool directed)
        : n_(n), directed_(directed), data_(n * n, kInfDistance) {}

    std::size_t n() const { return n_; }
    bool directed() const { return directed_; }
    Distance at(Rank u, Rank v) const { return data_[std::size_t(u) * n_ + v]; }
    Distance& at(Rank u, Rank v) { return data_[std::size_t(u) * n_ + v]; }
    const Distance* row(Rank u) const { return data_.data() + std::size_t(u) * n_; }

    // max finite distance (0 for an empty or edgeless graph)
    Distance diameter() const {
        Distance d = 0;
        for (Distance x : data_)
            if (x != kInfDistance && x > d) d = x;
        return d;
    }

private:
    std::size_t n_ = 0;
    bool directed_ = false;
    std::vector<Distance> data_;
};

namespace detail {

inline void oracle_guard(const Graph& g) {
    if (g.n() > kOracleMaxVertices || g.m() > kOracleMaxEdges)
        throw std::invalid_argument("oracle guard exceeded (" + std::to_string(g.n()) +
                                    " vertices, " + std::to_string(g.m()) + " edges)");
}

inline void sssp_row(const Graph& g, Rank s, Distance* row) {
    if (!g.weighted()) {
        std::vector<Rank> queue{s};
        row[s] = 0;
        std::size_t head = 0;
        while (head < queue.size()) {
            Rank v = queue[head++];
            for (Rank w : g.neighbors(v)) {
                if (row[w] != kInfDistance) continue;
                row[w] = row[v] + 1;
                queue.push_back(w);
            }
        }
    } else {
        using QE = std::pair<Distance, Rank>;
        std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
        row[s] = 0;
        pq.emplace(0, s);
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > row[v]) continue;
            auto nbrs = g.neighbors(v);
            auto wts = g.weights(v);
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                DistanceSum nd = DistanceSum(d) + wts[i];
                if (nd < row[nbrs[i]]) {
                    row[nbrs[i]] = static_cast<Distance>(nd);
                    pq.emplace(static_cast<Distance>(nd), nbrs[i]);
                }
            }
        }
    }
}

}  // namespace detail

// BFS (unweighted) or Dijkstra (weighted) from every source; respects edge
// direction. Rows are independent, so they are computed on worker threads.
inline DistanceMatrix all_pairs(const Graph& g, unsigned threads = 0) {
    detail::oracle_guard(g);
    const std::size_t n = g.n();
    DistanceMatrix matrix(n, g.directed());
    if (n == 0) return matrix;

    if (threads == 0)
        threads = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    threads = std::min<unsigned>(threads, n);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t s = next.fetch_add(1);
            if (s >= n) break;
            detail::sssp_row(g, static_cast<Rank>(s), &matrix.at(static_cast<Rank>(s), 0));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return matrix;
}

// Canonical labeling straight from the definition: u belongs to L(v) iff u is
// the highest-priority vertex lying on some shortest u-v path. Membership is
// decided from the distance matrix: w is on a shortest u-v path exactly when
// d(u,w) + d(w,v) = d(u,v). Scanning candidate witnesses in rank order makes
// the common case terminate at the first (highest-priority) midpoint.
inline LabelStore canonical_labels_bruteforce(const Graph& g, const DistanceMatrix& m) {
    const std::size_t n = g.n();
    LabelStore store(n, g.directed(), g.weighted());

    auto highest_on_path = [&](Rank u, Rank v, Distance d) -> Rank {
        for (Rank w = 0; w < n; ++w) {
            Distance a = m.at(u, w);
            if (a == kInfDistance || a > d) continue;
            Distance b = m.at(w, v);
            if (b != kInfDistance && DistanceSum(a) + b == d) return w;
        }
        return kInvalidRank;  // unreachable for finite d
    };

    for (Rank v = 0; v < n; ++v) {
        for (Rank u = 0; u <= v; ++u) {
            Distance d = m.at(u, v);
            if (d == kInfDistance) continue;
            if (highest_on_path(u, v, d) == u)
                store.mutable_labels(v, Side::In).push_back({u, d});
        }
        if (g.directed()) {
            // hubs v reaches: u in L_out(v) iff u tops a shortest v->u path
            for (Rank u = 0; u <= v; ++u) {
                Distance d = m.at(v, u);
                if (d == kInfDistance) continue;
                if (highest_on_path(v, u, d) == u)
                    store.mutable_labels(v, Side::Out).push_back({u, d});
            }
        }
    }
    return store;
}

inline LabelStore canonical_labels_bruteforce(const Graph& g) {
    detail::oracle_guard(g);
    return canonical_labels_bruteforce(g, all_pairs(g));
}

struct VerifyReport {
    bool query_exact = true;
    bool canonical_equal = true;
    std::vector<std::string> failures;

    bool pass() const { return query_exact && canonical_equal; }
};

// Checks a store against the ground truth: every pairwise query must equal
// the matrix distance, and the label sets must equal the canonical ones.
// The first few offending pairs/entries are named in the report.
inline VerifyReport verify_store(const LabelStore& store, const Graph& g,
                                 std::size_t max_failures = 8) {
    detail::oracle_guard(g);
    VerifyReport report;
    if (store.n() != g.n()) {
        report.query_exact = report.canonical_equal = false;
        report.failures.push_back("store has " + std::to_string(store.n()) +
                                  " vertices, graph has " + std::to_string(g.n()));
        return report;
    }
    DistanceMatrix matrix = all_pairs(g);
    for (Rank u = 0; u < g.n(); ++u)
        for (Rank v = 0; v < g.n(); ++v) {
            Distance got = store.query_distance(u, v);
            Distance want = matrix.at(u, v);
            if (got != want) {
                report.query_exact = false;
                if (report.failures.size() < max_failures) {
                    std::ostringstream msg;
                    msg << "query(" << u << "," << v << ") = ";
                    if (got == kInfDistance)
                        msg << "INF";
                    else
                        msg << got;
                    msg << ", oracle " << (want == kInfDistance ? "INF" : std::to_string(want));
                    report.failures.push_back(msg.str());
                }
            }
        }

    LabelStore canonical = canonical_labels_bruteforce(g, matrix);
    for (Rank v = 0; v < g.n(); ++v) {
        for (Side side : {Side::Out, Side::In}) {
            if (side == Side::In && !g.directed()) break;
            auto got = store.labels(v, side);
            auto want = canonical.labels(v, side);
            if (std::vector<HubEntry>(got.begin(), got.end()) !=
                std::vector<HubEntry>(want.begin(), want.end())) {
                report.canonical_equal = false;
                if (report.failures.size() < max_failures)
                    report.failures.push_back(
                        "label list of vertex " + std::to_string(v) +
                        (g.directed() ? (side == Side::In ? " (in)" : " (out)") : "") +
                        " differs from the canonical labeling");
            }
        }
    }
    return report;
}

}  // namespace hublab
