#pragma once

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hublab/bsp.hpp"
#include "hublab/counters.hpp"
#include "hublab/distance_check.hpp"
#include "hublab/graph.hpp"
#include "hublab/label_store.hpp"
#include "hublab/types.hpp"

namespace hublab {

// Unbatched vertex-centric labeling: every vertex starts active with its self
// label and all hubs spread simultaneously, one BSP wave per distance. Kept
// as a reference implementation: it produces exactly the sequential labels
// but pays for duplicate arrivals and for rebuilding a transient index over
// L(u) on every single check, which is what the batched variant removes.
//
// Scatter forwards each fresh entry (u, d) of a vertex to the neighbors
// ranked below u that have not accepted u yet; gather deduplicates identical
// messages, checks each unique arrival, and stages accepted entries; commit
// publishes them for the next wave.

// Diagnostics gathered when tracing is on. A hub can reach a vertex at no
// more than two consecutive iterations, which the tests assert against the
// true distances.
struct ArrivalTrace {
    bool enabled = false;
    // key: hub * n + target -> sorted unique iterations of message arrival
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> arrivals;
    // distinct (hub, target) pairs that went through a distance check
    std::unordered_set<std::uint64_t> checked_pairs;
};

struct VcPllOptions {
    bool trace = false;
    unsigned threads = 1;
    std::size_t chunk = 64;
};

struct VcPllResult {
    LabelStore labels;
    CounterReport counters;
    ArrivalTrace trace;
};

namespace detail {

// Per-vertex bitmap over hubs already accepted; backs the "u not yet in L(v)"
// scatter filter with an O(1) committed-state lookup.
class MemberBits {
public:
    MemberBits(std::size_t n) : words_((n + 63) / 64), bits_(n * words_, 0) {}
    bool test(Rank v, Rank hub) const {
        return bits_[std::size_t(v) * words_ + (hub >> 6)] >> (hub & 63) & 1;
    }
    void set(Rank v, Rank hub) {
        bits_[std::size_t(v) * words_ + (hub >> 6)] |= std::uint64_t{1} << (hub & 63);
    }

private:
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

struct VcLocal {
    std::uint64_t messages = 0, edges = 0, pos = 0, neg = 0;
    std::uint64_t scan_pos = 0, scan_neg = 0, index_len = 0, multi = 0;
    std::vector<HubEntry> unique_scratch;
    ArrivalTrace trace;
};

}  // namespace detail

inline VcPllResult vcpll(const Graph& g, const VcPllOptions& opt = {}) {
    if (g.weighted()) throw std::invalid_argument("vcpll: weighted input");
    if (g.directed()) throw std::invalid_argument("vcpll: directed input");

    const std::size_t n = g.n();
    VcPllResult res{LabelStore(n), {}, {}};
    res.trace.enabled = opt.trace;
    CounterReport& c = res.counters;
    c.algorithm = "vc-pll";
    c.graph_fingerprint = g.fingerprint();
    c.n = n;
    c.m = g.m();
    c.threads = std::max(1u, opt.threads);

    unsigned threads = std::max(1u, opt.threads);
    detail::MemberBits member(n);
    std::vector<std::vector<HubEntry>> delta(n), pending(n);
    std::vector<detail::VcLocal> local(threads);
    std::vector<HubIndex> scratch;
    scratch.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) scratch.emplace_back(n);

    ActiveSet actives(n);
    for (Rank v = 0; v < n; ++v) {
        res.labels.mutable_labels(v).push_back({v, 0});
        member.set(v, v);
        delta[v] = {{v, 0}};
        actives.insert(v);
    }

    BspEngine<HubEntry> engine(n);
    using Env = BspEngine<HubEntry>::Envelope;

    auto scatter = [&](unsigned w, Rank a, BspEngine<HubEntry>::Emitter& em) {
        for (Rank v : g.neighbors(a)) {
            for (const HubEntry& e : delta[a]) {
                if (e.hub >= v || member.test(v, e.hub)) continue;
                em.send(v, {e.hub, e.dist + 1});
                ++local[w].messages;
            }
        }
    };

    auto gather = [&](unsigned w, Rank v, std::span<const Env> inbox) {
        detail::VcLocal& lc = local[w];
        ++lc.edges;  // one grouped inbox service per destination per wave
        // all arrivals in one wave carry the same distance: unique by hub
        auto& uniq = lc.unique_scratch;
        uniq.clear();
        for (const Env& env : inbox) uniq.push_back(env.msg);
        std::sort(uniq.begin(), uniq.end(),
                  [](const HubEntry& a, const HubEntry& b) { return a.hub < b.hub; });
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

        for (const HubEntry& msg : uniq) {
            if (res.trace.enabled) {
                std::uint64_t key = std::uint64_t(msg.hub) * n + v;
                lc.trace.arrivals[key].push_back(msg.dist);  // wave number == dist
                lc.trace.checked_pairs.insert(key);
            }
            // transient index over L(u), rebuilt for this one check
            HubIndex& idx = scratch[w];
            lc.index_len += idx.build(res.labels.labels(msg.hub));
            CheckOutcome out = batch_distance_check(res.labels.labels(v), idx.data(),
                                                    msg.dist, kInvalidRank, v);
            idx.clear();
            if (out.accept) {
                ++lc.pos;
                lc.scan_pos += out.scanned;
                pending[v].push_back(msg);
            } else {
                ++lc.neg;
                lc.scan_neg += out.scanned;
            }
        }
    };

    auto commit = [&](unsigned w, Rank v) {
        delta[v].swap(pending[v]);
        pending[v].clear();
        if (delta[v].empty()) return false;
        // gather visited hubs in sorted order, so delta is already sorted
        res.labels.append_delta(v, delta[v]);
        for (const HubEntry& e : delta[v]) member.set(v, e.hub);
        if (delta[v].size() >= 2) ++local[w].multi;
        return true;
    };

    c.iterations = engine.run(actives, scatter, gather, commit,
                              BspSchedule{threads, opt.chunk});

    for (detail::VcLocal& lc : local) {
        c.messages_sent += lc.messages;
        c.edge_accesses += lc.edges;
        c.checks_positive += lc.pos;
        c.checks_negative += lc.neg;
        c.scan_len_positive += lc.scan_pos;
        c.scan_len_negative += lc.scan_neg;
        c.index_build_len += lc.index_len;
        c.multi_delta_commits += lc.multi;
        if (res.trace.enabled) {
            for (auto& [key, iters] : lc.trace.arrivals) {
                auto& dst = res.trace.arrivals[key];
                dst.insert(dst.end(), iters.begin(), iters.end());
            }
            res.trace.checked_pairs.merge(lc.trace.checked_pairs);
        }
    }
    if (res.trace.enabled)
        for (auto& [key, iters] : res.trace.arrivals) {
            std::sort(iters.begin(), iters.end());
            iters.erase(std::unique(iters.begin(), iters.end()), iters.end());
        }
    return res;
}

}  // namespace hublab
