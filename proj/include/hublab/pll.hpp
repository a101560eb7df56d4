#pragma once

#include <queue>
#include <stdexcept>
#include <vector>

#include "hublab/counters.hpp"
#include "hublab/distance_check.hpp"
#include "hublab/graph.hpp"
#include "hublab/label_store.hpp"
#include "hublab/types.hpp"

namespace hublab {

// Sequential pruned landmark labeling: one pruned search per vertex in rank
// order, the correctness and cost baseline for the vertex-centric variants.
//
// The search from root u only ever pushes to neighbors ranked below u; the
// canonical criterion makes any higher-ranked neighbor unreachable as a label
// target, so the push is skipped rather than filtered at the check. A vertex
// is marked visited at the moment it is actually pushed.
//
// Counter conventions: one message and one edge access per queue push beyond
// the root, one distance check per pop, so messages_sent == edge_accesses and
// checks_total == messages_sent for the unweighted search.

struct PllResult {
    LabelStore labels;
    CounterReport counters;
};

namespace detail {

// Marks with O(touched) reset between roots.
class VisitedSet {
public:
    explicit VisitedSet(std::size_t n) : flag_(n, 0) {}
    bool test(Rank v) const { return flag_[v]; }
    void mark(Rank v) {
        flag_[v] = 1;
        dirty_.push_back(v);
    }
    void clear() {
        for (Rank v : dirty_) flag_[v] = 0;
        dirty_.clear();
    }

private:
    std::vector<std::uint8_t> flag_;
    std::vector<Rank> dirty_;
};

inline Rank batch_base_of(Rank u, std::uint32_t accounting_batch) {
    return accounting_batch == 0 ? kInvalidRank : u - (u % accounting_batch);
}

inline void record_check(CounterReport& c, const CheckOutcome& res, Rank u,
                         std::uint32_t accounting_batch) {
    if (res.accept) {
        ++c.checks_positive;
        c.scan_len_positive += res.scanned;
        c.scan_pos_inbatch += res.scanned_inbatch;
    } else {
        ++c.checks_negative;
        c.scan_len_negative += res.scanned;
        c.scan_neg_inbatch += res.scanned_inbatch;
        if (accounting_batch != 0)
            c.neg_inbatch_per_batch[u / accounting_batch] += res.scanned_inbatch;
    }
}

}  // namespace detail

inline PllResult pll_unweighted(const Graph& g, std::uint32_t accounting_batch = 0) {
    if (g.weighted()) throw std::invalid_argument("pll_unweighted: weighted input");
    if (g.directed()) throw std::invalid_argument("pll_unweighted: directed input");

    const std::size_t n = g.n();
    PllResult res{LabelStore(n), {}};
    CounterReport& c = res.counters;
    c.algorithm = "pll";
    c.graph_fingerprint = g.fingerprint();
    c.n = n;
    c.m = g.m();
    c.batch_size = accounting_batch;
    if (accounting_batch != 0)
        c.neg_inbatch_per_batch.assign((n + accounting_batch - 1) / accounting_batch, 0);

    HubIndex hub_index(n);
    detail::VisitedSet visited(n);
    std::vector<std::pair<Rank, Distance>> queue;

    for (Rank u = 0; u < n; ++u) {
        Rank base = detail::batch_base_of(u, accounting_batch);
        res.labels.mutable_labels(u).push_back({u, 0});  // self, highest rank so far
        hub_index.build(res.labels.labels(u));
        visited.mark(u);

        queue.clear();
        std::size_t head = 0;
        auto expand = [&](Rank v, Distance d) {
            for (Rank w : g.neighbors(v)) {
                if (w <= u || visited.test(w)) continue;
                visited.mark(w);
                queue.emplace_back(w, d + 1);
                ++c.messages_sent;
                ++c.edge_accesses;
            }
        };
        expand(u, 0);
        while (head < queue.size()) {
            auto [v, d] = queue[head++];
            CheckOutcome out =
                batch_distance_check(res.labels.labels(v), hub_index.data(), d, base, v);
            detail::record_check(c, out, u, accounting_batch);
            if (out.accept) {
                res.labels.mutable_labels(v).push_back({u, d});
                expand(v, d);
            }
        }
        hub_index.clear();
        visited.clear();
    }
    return res;
}

// Pruned Dijkstra per root. A popped entry worse than the already settled
// distance is stale and skipped; every genuine pop performs the same distance
// check before labeling and expanding. Unweighted inputs are legal here and
// must produce exactly the unweighted labels (unit weights).
inline PllResult pll_weighted(const Graph& g, std::uint32_t accounting_batch = 0) {
    if (g.directed()) throw std::invalid_argument("pll_weighted: directed input");

    const std::size_t n = g.n();
    PllResult res{LabelStore(n, false, g.weighted()), {}};
    CounterReport& c = res.counters;
    c.algorithm = "pll-w";
    c.graph_fingerprint = g.fingerprint();
    c.n = n;
    c.m = g.m();
    c.batch_size = accounting_batch;
    if (accounting_batch != 0)
        c.neg_inbatch_per_batch.assign((n + accounting_batch - 1) / accounting_batch, 0);

    HubIndex hub_index(n);
    HubIndex best(n);  // tentative distances for the current root
    using QE = std::pair<Distance, Rank>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;

    for (Rank u = 0; u < n; ++u) {
        Rank base = detail::batch_base_of(u, accounting_batch);
        res.labels.mutable_labels(u).push_back({u, 0});
        hub_index.build(res.labels.labels(u));

        auto relax = [&](Distance d, std::span<const Rank> nbrs,
                         std::span<const Weight> wts) {
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                Rank w = nbrs[i];
                if (w <= u) continue;
                DistanceSum nd = DistanceSum(d) + wts[i];
                if (nd >= kInfDistance) throw std::overflow_error("distance overflow");
                if (nd < best.at(w)) {
                    best.set(w, static_cast<Distance>(nd));
                    pq.emplace(static_cast<Distance>(nd), w);
                    ++c.messages_sent;
                    ++c.edge_accesses;
                }
            }
        };
        relax(0, g.neighbors(u), g.weights(u));
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > best.at(v)) continue;  // lazy deletion of stale entries
            CheckOutcome out =
                batch_distance_check(res.labels.labels(v), hub_index.data(), d, base, v);
            detail::record_check(c, out, u, accounting_batch);
            if (out.accept) {
                res.labels.mutable_labels(v).push_back({u, d});
                relax(d, g.neighbors(v), g.weights(v));
            }
        }
        hub_index.clear();
        best.clear();
    }
    return res;
}

// Directed labeling: per root, a forward search over outgoing edges fills the
// reached vertices' L_in, then a backward search over incoming edges fills
// L_out. The forward check pairs the root's L_out index against the target's
// L_in, and symmetrically for backward. Handles weighted graphs by switching
// the traversal to Dijkstra.
inline PllResult pll_directed(const Graph& g) {
    if (!g.directed()) throw std::invalid_argument("pll_directed: undirected input");

    const std::size_t n = g.n();
    PllResult res{LabelStore(n, true, g.weighted()), {}};
    CounterReport& c = res.counters;
    c.algorithm = "pll-d";
    c.graph_fingerprint = g.fingerprint();
    c.n = n;
    c.m = g.m();

    HubIndex hub_index(n);
    HubIndex best(n);
    detail::VisitedSet visited(n);
    std::vector<std::pair<Rank, Distance>> queue;
    using QE = std::pair<Distance, Rank>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;

    // One pruned search; fills `fill` labels of reached vertices with hub u,
    // checking against the index built over the root's `indexed` side.
    auto search = [&](Rank u, Side fill, auto&& nbrs_of, auto&& wts_of) {
        Side indexed = fill == Side::In ? Side::Out : Side::In;
        hub_index.build(res.labels.labels(u, indexed));
        if (!g.weighted()) {
            visited.mark(u);
            queue.clear();
            std::size_t head = 0;
            auto expand = [&](Rank v, Distance d) {
                for (Rank w : nbrs_of(v)) {
                    if (w <= u || visited.test(w)) continue;
                    visited.mark(w);
                    queue.emplace_back(w, d + 1);
                    ++c.messages_sent;
                    ++c.edge_accesses;
                }
            };
            expand(u, 0);
            while (head < queue.size()) {
                auto [v, d] = queue[head++];
                CheckOutcome out = batch_distance_check(res.labels.labels(v, fill),
                                                        hub_index.data(), d,
                                                        kInvalidRank, v);
                detail::record_check(c, out, u, 0);
                if (out.accept) {
                    res.labels.mutable_labels(v, fill).push_back({u, d});
                    expand(v, d);
                }
            }
            visited.clear();
        } else {
            auto relax = [&](Rank v, Distance d) {
                auto nbrs = nbrs_of(v);
                auto wts = wts_of(v);
                for (std::size_t i = 0; i < nbrs.size(); ++i) {
                    Rank w = nbrs[i];
                    if (w <= u) continue;
                    DistanceSum nd = DistanceSum(d) + wts[i];
                    if (nd >= kInfDistance) throw std::overflow_error("distance overflow");
                    if (nd < best.at(w)) {
                        best.set(w, static_cast<Distance>(nd));
                        pq.emplace(static_cast<Distance>(nd), w);
                        ++c.messages_sent;
                        ++c.edge_accesses;
                    }
                }
            };
            relax(u, 0);
            while (!pq.empty()) {
                auto [d, v] = pq.top();
                pq.pop();
                if (d > best.at(v)) continue;
                CheckOutcome out = batch_distance_check(res.labels.labels(v, fill),
                                                        hub_index.data(), d,
                                                        kInvalidRank, v);
                detail::record_check(c, out, u, 0);
                if (out.accept) {
                    res.labels.mutable_labels(v, fill).push_back({u, d});
                    relax(v, d);
                }
            }
            best.clear();
        }
        hub_index.clear();
    };

    for (Rank u = 0; u < n; ++u) {
        res.labels.mutable_labels(u, Side::Out).push_back({u, 0});
        res.labels.mutable_labels(u, Side::In).push_back({u, 0});
        search(u, Side::In, [&](Rank v) { return g.neighbors(v); },
               [&](Rank v) { return g.weights(v); });
        search(u, Side::Out, [&](Rank v) { return g.in_neighbors(v); },
               [&](Rank v) { return g.in_weights(v); });
    }
    return res;
}

}  // namespace hublab
