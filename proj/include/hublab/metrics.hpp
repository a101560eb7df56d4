#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hublab/counters.hpp"
#include "hublab/graph.hpp"
#include "hublab/label_store.hpp"
#include "hublab/oracle.hpp"
#include "hublab/types.hpp"

namespace hublab {

// Comparator between a sequential run and a batched vertex-centric run of the
// same graph and order. The hard claims hold exactly on every input; the
// negative-scan ratio is an empirical observation with a configurable band.

struct ClaimVerdict {
    std::string claim;
    bool hard = true;
    bool pass = false;
    std::uint64_t lhs = 0;
    std::uint64_t rhs = 0;
    std::string detail;
};

struct CompareVerdicts {
    std::vector<ClaimVerdict> claims;
    double negative_scan_ratio = 1.0;  // sequential / batched

    bool hard_pass() const {
        for (const auto& cv : claims)
            if (cv.hard && !cv.pass) return false;
        return true;
    }

    void print(std::ostream& out) const {
        for (const auto& cv : claims)
            out << (cv.pass ? "[pass] " : (cv.hard ? "[FAIL] " : "[warn] ")) << cv.claim
                << ": " << cv.lhs << (cv.hard ? " vs " : " / ") << cv.rhs
                << (cv.detail.empty() ? "" : "  (" + cv.detail + ")") << "\n";
    }
};

inline CompareVerdicts compare(const CounterReport& seq, const CounterReport& bvc,
                               double ratio_band = 0.10) {
    if (seq.graph_fingerprint != bvc.graph_fingerprint)
        throw std::invalid_argument("compare: reports come from different graphs");

    CompareVerdicts v;
    auto eq = [&](const char* name, std::uint64_t a, std::uint64_t b) {
        v.claims.push_back({name, true, a == b, a, b, ""});
    };
    auto le = [&](const char* name, std::uint64_t a, std::uint64_t b) {
        v.claims.push_back({name, true, a <= b, a, b, ""});
    };

    eq("messages equal", seq.messages_sent, bvc.messages_sent);
    eq("distance checks equal", seq.checks_total(), bvc.checks_total());
    le("positive scan cost, batched <= sequential", bvc.scan_len_positive,
       seq.scan_len_positive);
    le("edge accesses, batched <= sequential", bvc.edge_accesses, seq.edge_accesses);
    eq("in-batch positive scan matches group formula", bvc.scan_pos_inbatch,
       bvc.group_formula_inbatch);

    double ratio = 1.0;
    if (bvc.scan_len_negative == 0 && seq.scan_len_negative == 0)
        ratio = 1.0;
    else if (bvc.scan_len_negative == 0)
        ratio = std::numeric_limits<double>::infinity();
    else
        ratio = double(seq.scan_len_negative) / double(bvc.scan_len_negative);
    v.negative_scan_ratio = ratio;
    ClaimVerdict soft;
    soft.claim = "negative scan ratio near one";
    soft.hard = false;
    soft.pass = std::abs(ratio - 1.0) <= ratio_band;
    soft.lhs = seq.scan_len_negative;
    soft.rhs = bvc.scan_len_negative;
    soft.detail = "ratio " + std::to_string(ratio);
    v.claims.push_back(soft);
    return v;
}

// Closed-form positive-scan cost of one vertex's batch arrivals. Entries that
// arrive in the same wave cannot prune one another, so against arrival groups
// of sizes n_1..n_k (n = sum) the batched run pays
//   n(n-1)/2 - sum_i n_i(n_i-1)/2
// where the sequential schedule pays the full n(n-1)/2.
struct GroupCosts {
    std::uint64_t sequential_cost = 0;
    std::uint64_t batched_cost = 0;
};

inline GroupCosts arrival_group_costs(std::span<const std::uint32_t> groups) {
    if (groups.empty()) throw std::invalid_argument("arrival_group_costs: no groups");
    std::uint64_t total = 0, intra = 0;
    for (std::uint32_t g : groups) {
        if (g == 0) throw std::invalid_argument("arrival_group_costs: empty group");
        total += g;
        intra += std::uint64_t(g) * (g - 1) / 2;
    }
    return {total * (total - 1) / 2, total * (total - 1) / 2 - intra};
}

// Desk-scale evaluation of the one-sided bounds on the negative-scan
// difference. For the in-batch part of the negative scans, the saving of one
// schedule over the other is bounded by counting, per batch, the label pairs
// whose check order can actually differ between the two schedules:
//
//   <x,u>: batch hubs v, held by a neighbor y of x but not by x, with
//          rank(u) < rank(v) < rank(x) and d(x,u) > d(v,y) + 1
//          (cases where the batched order can see less of L(x));
//   <y,v>: batch hubs u, held by a neighbor x of y but not by y, with
//          rank(u) < rank(v) and d(x,u) > d(v,y) + 1
//          (cases where the sequential order can see less of L(y)).
//
// The check asserts -S_yv <= seq_inbatch - bvc_inbatch <= S_xu per batch.
struct BatchBounds {
    std::size_t batch = 0;
    std::uint64_t s_xu = 0;
    std::uint64_t s_yv = 0;
    std::int64_t measured_difference = 0;  // sequential minus batched
    bool holds = false;
};

inline std::vector<BatchBounds> negative_scan_bounds_report(
    const Graph& g, const LabelStore& labels, const DistanceMatrix& matrix,
    std::uint32_t batch_size, const CounterReport& seq, const CounterReport& bvc) {
    if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
    detail::oracle_guard(g);
    const std::size_t n = g.n();
    std::size_t num_batches = (n + batch_size - 1) / batch_size;
    if (seq.neg_inbatch_per_batch.size() != num_batches ||
        bvc.neg_inbatch_per_batch.size() != num_batches)
        throw std::invalid_argument("reports lack per-batch tallies for this batch size");

    std::vector<BatchBounds> out(num_batches);
    // batch labels of each vertex: final label entries whose hub is in batch b
    auto batch_labels = [&](Rank x, Rank base, Rank end) {
        std::vector<HubEntry> result;
        for (const HubEntry& e : labels.labels(x))
            if (e.hub >= base && e.hub < end && e.hub != x) result.push_back(e);
        return result;
    };

    for (std::size_t b = 0; b < num_batches; ++b) {
        Rank base = static_cast<Rank>(b * batch_size);
        Rank end = static_cast<Rank>(std::min<std::size_t>(n, base + batch_size));
        BatchBounds& bb = out[b];
        bb.batch = b;

        std::vector<std::vector<HubEntry>> li(n);
        for (Rank x = 0; x < n; ++x) li[x] = batch_labels(x, base, end);

        std::vector<Distance> min_host(n, kInfDistance);  // min d(hub, host) over hosts
        std::vector<Distance> max_host(n, kInfDistance);  // max d(hub, host) over hosts
        std::vector<Rank> touched;
        for (Rank x = 0; x < n; ++x) {
            if (li[x].empty() && g.degree(x) == 0) continue;
            // candidates: batch hubs held by neighbors of x but not by x itself
            for (Rank y : g.neighbors(x))
                for (const HubEntry& e : li[y]) {
                    if (min_host[e.hub] == kInfDistance) {
                        touched.push_back(e.hub);
                        min_host[e.hub] = max_host[e.hub] = e.dist;
                    } else {
                        min_host[e.hub] = std::min(min_host[e.hub], e.dist);
                        max_host[e.hub] = std::max(max_host[e.hub], e.dist);
                    }
                }
            for (const HubEntry& e : li[x]) min_host[e.hub] = kInfDistance;

            for (const HubEntry& xu : li[x]) {
                Rank u = xu.hub;
                for (Rank v : touched) {
                    if (min_host[v] == kInfDistance) continue;
                    // <x,u>: v can reach x strictly after u's own arrival time
                    if (u < v && v < x &&
                        DistanceSum(matrix.at(x, u)) > DistanceSum(min_host[v]) + 1)
                        ++bb.s_xu;
                }
                // <y,v> with y := x, v := u's co-resident label: arriving hubs
                // held by some neighbor far enough away
                Rank v = u;
                for (Rank cand : touched) {
                    if (min_host[cand] == kInfDistance) continue;
                    if (cand < v && DistanceSum(max_host[cand]) > DistanceSum(xu.dist) + 1)
                        ++bb.s_yv;
                }
            }
            for (Rank v : touched) min_host[v] = max_host[v] = kInfDistance;
            touched.clear();
        }

        bb.measured_difference = std::int64_t(seq.neg_inbatch_per_batch[b]) -
                                 std::int64_t(bvc.neg_inbatch_per_batch[b]);
        bb.holds = bb.measured_difference <= std::int64_t(bb.s_xu) &&
                   -bb.measured_difference <= std::int64_t(bb.s_yv);
    }
    return out;
}

}  // namespace hublab
