#pragma once

#include <algorithm>
#include <atomic>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hublab/bsp.hpp"
#include "hublab/counters.hpp"
#include "hublab/distance_check.hpp"
#include "hublab/graph.hpp"
#include "hublab/label_store.hpp"
#include "hublab/types.hpp"

namespace hublab {

// Batched vertex-centric labeling. Vertices are split into rank-ordered
// batches; each batch runs the vertex-centric waves of vc_pll, but with two
// structural advantages:
//  - a candidate filter per (destination, batch hub) guarantees at most one
//    message per hub per destination per batch, replacing the visited flag of
//    the sequential search;
//  - every batch hub keeps a resident index over its own label list, updated
//    at commit, so a distance check scans only the target's list.
//
// With batch size 1 the run is step-equivalent to the sequential algorithm,
// counters included. Directed graphs run two message streams (one per label
// side); weighted graphs switch the candidate bit to a best-distance slot
// with strictly improving propagation, then finalize each batch with a
// distance recheck.

struct BvcOptions {
    std::uint32_t batch_size = 1024;
    unsigned threads = 1;
    std::size_t chunk = 64;
    bool collect_groups = false;  // record per-vertex arrival group sizes
};

struct BvcResult {
    LabelStore labels;
    CounterReport counters;
    // per batch: (vertex, arrival group sizes) for vertices that accepted
    // anything; filled only when collect_groups is set
    std::vector<std::vector<std::pair<Rank, std::vector<std::uint32_t>>>> groups;
    PhaseTimes phases;
};

namespace detail {

// One bit per (destination vertex, within-batch hub index), set atomically at
// send time. Touched vertices are dirty-listed so the per-batch clear costs
// O(touched * batch_size / 64), never O(n).
class CandidateBitSet {
public:
    CandidateBitSet(std::size_t n, std::uint32_t batch_width)
        : words_(std::max<std::size_t>(1, (batch_width + 63) / 64)),
          bits_(n * words_), touched_(n) {}

    // Returns true when this call set the bit (the message wins the slot).
    bool test_and_set(Rank v, std::uint32_t idx, std::vector<Rank>& dirty) {
        std::atomic<std::uint64_t>& word = bits_[std::size_t(v) * words_ + (idx >> 6)];
        std::uint64_t mask = std::uint64_t{1} << (idx & 63);
        if (word.load(std::memory_order_relaxed) & mask) return false;
        if (word.fetch_or(mask, std::memory_order_relaxed) & mask) return false;
        if (!touched_[v].exchange(true, std::memory_order_relaxed)) dirty.push_back(v);
        return true;
    }

    void clear_vertex(Rank v) {
        for (std::size_t i = 0; i < words_; ++i)
            bits_[std::size_t(v) * words_ + i].store(0, std::memory_order_relaxed);
        touched_[v].store(false, std::memory_order_relaxed);
    }

private:
    std::size_t words_;
    std::vector<std::atomic<std::uint64_t>> bits_;
    std::vector<std::atomic<bool>> touched_;
};

// Weighted replacement for the candidate bit: one slot per (destination,
// batch hub) holding the best (distance, source) ever offered, packed so an
// atomic min resolves ties deterministically. A slot never increases within
// a batch. Ownership of a send is decided in a claim pass before scatter:
// the source whose offer still equals the slot emits the message.
class CandidateDistTable {
public:
    static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

    CandidateDistTable(std::size_t n, std::uint32_t batch_width)
        : width_(std::max<std::uint32_t>(1, batch_width)),
          slots_(std::size_t(n) * width_), touched_(n) {
        for (auto& s : slots_) s.store(kEmpty, std::memory_order_relaxed);
    }

    static std::uint64_t pack(Distance d, Rank src) {
        return std::uint64_t(d) << 32 | src;
    }
    static Distance dist_of(std::uint64_t packed) {
        return static_cast<Distance>(packed >> 32);
    }

    void offer(Rank v, std::uint32_t idx, std::uint64_t packed, std::vector<Rank>& dirty) {
        std::atomic<std::uint64_t>& slot = slots_[std::size_t(v) * width_ + idx];
        std::uint64_t cur = slot.load(std::memory_order_relaxed);
        while (packed < cur) {
            if (slot.compare_exchange_weak(cur, packed, std::memory_order_relaxed)) {
                if (!touched_[v].exchange(true, std::memory_order_relaxed))
                    dirty.push_back(v);
                return;
            }
        }
    }

    std::uint64_t get(Rank v, std::uint32_t idx) const {
        return slots_[std::size_t(v) * width_ + idx].load(std::memory_order_relaxed);
    }

    void clear_vertex(Rank v) {
        for (std::uint32_t i = 0; i < width_; ++i)
            slots_[std::size_t(v) * width_ + i].store(kEmpty, std::memory_order_relaxed);
        touched_[v].store(false, std::memory_order_relaxed);
    }

private:
    std::uint32_t width_;
    std::vector<std::atomic<std::uint64_t>> slots_;
    std::vector<std::atomic<bool>> touched_;
};

struct BvcMsg {
    std::uint32_t hub_idx;  // within-batch index; rank = batch_base + hub_idx
    Distance dist;
    std::uint8_t to_in;  // 1: extends L_in (the only stream when undirected)
};

struct BvcLocal {
    std::uint64_t messages = 0, edges = 0, pos = 0, neg = 0;
    std::uint64_t scan_pos = 0, scan_neg = 0, pos_inb = 0, neg_inb = 0;
    std::uint64_t neg_inb_batch = 0;  // current batch only
    std::uint64_t multi = 0;
    std::vector<Rank> dirty_in, dirty_out;   // candidate-structure owners
    std::vector<Rank> committed;             // vertices first committed this batch
};

// Sorted merge that may overwrite an existing hub's distance (weighted
// improvements); plain duplicates are rejected like LabelStore::append_delta.
inline void merge_delta(std::vector<HubEntry>& list, const std::vector<HubEntry>& delta,
                        bool allow_improve) {
    for (const HubEntry& e : delta) {
        auto pos = std::lower_bound(list.begin(), list.end(), e.hub,
                                    [](const HubEntry& a, Rank h) { return a.hub < h; });
        if (pos != list.end() && pos->hub == e.hub) {
            if (!allow_improve || e.dist >= pos->dist)
                throw std::logic_error("duplicate hub in batch commit");
            pos->dist = e.dist;
        } else {
            list.insert(pos, e);
        }
    }
}

class BvcRunner {
public:
    BvcRunner(const Graph& g, const BvcOptions& opt, bool weighted_mode)
        : g_(g), opt_(opt), weighted_(weighted_mode), directed_(g.directed()),
          n_(g.n()), batch_(opt.batch_size),
          width_(static_cast<std::uint32_t>(std::min<std::size_t>(opt.batch_size,
                                                                  std::max<std::size_t>(n_, 1)))),
          threads_(std::max(1u, opt.threads)),
          result_{LabelStore(n_, directed_, g.weighted()), {}, {}, {}},
          delta_in_(n_), delta_out_(directed_ ? n_ : 0), pending_in_(n_),
          pending_out_(directed_ ? n_ : 0), group_sizes_(n_), engine_(n_),
          local_(threads_) {
        if (batch_ == 0) throw std::invalid_argument("batch_size must be >= 1");
        CounterReport& c = result_.counters;
        c.algorithm = weighted_ ? "bvc-pll-w" : (directed_ ? "bvc-pll-d" : "bvc-pll");
        c.graph_fingerprint = g.fingerprint();
        c.n = n_;
        c.m = g.m();
        c.batch_size = batch_;
        c.threads = threads_;
    }

    BvcResult run() {
        if (n_ == 0) return std::move(result_);
        std::size_t num_batches = (n_ + batch_ - 1) / batch_;
        result_.counters.neg_inbatch_per_batch.assign(num_batches, 0);
        if (opt_.collect_groups) result_.groups.resize(num_batches);

        index_out_.reserve(width_);
        for (std::uint32_t j = 0; j < width_; ++j) index_out_.emplace_back(n_);
        if (directed_) {
            index_in_.reserve(width_);
            for (std::uint32_t j = 0; j < width_; ++j) index_in_.emplace_back(n_);
        }
        if (weighted_) {
            table_in_ = std::make_unique<CandidateDistTable>(n_, width_);
            if (directed_) table_out_ = std::make_unique<CandidateDistTable>(n_, width_);
        } else {
            cand_in_ = std::make_unique<CandidateBitSet>(n_, width_);
            if (directed_) cand_out_ = std::make_unique<CandidateBitSet>(n_, width_);
        }

        ActiveSet actives(n_);
        for (std::size_t b = 0; b < num_batches; ++b) {
            base_ = static_cast<Rank>(b * batch_);
            end_ = static_cast<Rank>(std::min<std::size_t>(n_, base_ + batch_));
            run_batch(b, actives);
        }
        result_.phases = engine_.phase_times();
        return std::move(result_);
    }

private:
    const Graph& g_;
    BvcOptions opt_;
    bool weighted_;
    bool directed_;
    std::size_t n_;
    std::uint32_t batch_;
    std::uint32_t width_;
    unsigned threads_;
    BvcResult result_;

    Rank base_ = 0, end_ = 0;
    std::vector<std::vector<HubEntry>> delta_in_, delta_out_;
    std::vector<std::vector<HubEntry>> pending_in_, pending_out_;
    std::vector<std::vector<std::uint32_t>> group_sizes_;  // current batch, per vertex
    std::vector<HubIndex> index_out_;  // index over labels(u, Out) per batch slot
    std::vector<HubIndex> index_in_;   // index over labels(u, In), directed only
    std::unique_ptr<CandidateBitSet> cand_in_, cand_out_;
    std::unique_ptr<CandidateDistTable> table_in_, table_out_;
    BspEngine<BvcMsg> engine_;
    std::vector<BvcLocal> local_;

    using Env = BspEngine<BvcMsg>::Envelope;
    using Emitter = BspEngine<BvcMsg>::Emitter;

    bool in_batch(Rank v) const { return v >= base_ && v < end_; }

    void run_batch(std::size_t b, ActiveSet& actives) {
        LabelStore& store = result_.labels;
        for (Rank u = base_; u < end_; ++u) {
            HubEntry self{u, 0};
            store.append_delta(u, {&self, 1}, Side::In);
            delta_in_[u] = {self};
            if (directed_) {
                store.append_delta(u, {&self, 1}, Side::Out);
                delta_out_[u] = {self};
                index_in_[u - base_].build(store.labels(u, Side::In));
            }
            index_out_[u - base_].build(store.labels(u, Side::Out));
            actives.insert(u);
        }

        BspSchedule schedule{threads_, opt_.chunk};
        auto scatter = [this](unsigned w, Rank a, Emitter& em) { do_scatter(w, a, em); };
        auto gather = [this](unsigned w, Rank v, std::span<const Env> inbox) {
            do_gather(w, v, inbox);
        };
        auto commit = [this](unsigned w, Rank v) { return do_commit(w, v); };
        if (weighted_) {
            auto claim = [this](unsigned w, Rank a) { do_claim(w, a); };
            result_.counters.iterations +=
                engine_.run(actives, scatter, gather, commit, schedule, claim);
        } else {
            result_.counters.iterations +=
                engine_.run(actives, scatter, gather, commit, schedule);
        }

        if (weighted_) result_.counters.recheck_removed += recheck_batch();
        finish_batch(b);
    }

    // --- scatter ------------------------------------------------------------

    void send_stream(unsigned w, Rank a, Emitter& em, const std::vector<HubEntry>& delta,
                     std::span<const Rank> nbrs, std::span<const Weight> wts,
                     bool to_in) {
        BvcLocal& lc = local_[w];
        CandidateBitSet* cand = to_in ? cand_in_.get() : cand_out_.get();
        CandidateDistTable* table = to_in ? table_in_.get() : table_out_.get();
        std::vector<Rank>& dirty = to_in ? lc.dirty_in : lc.dirty_out;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            Rank v = nbrs[i];
            for (const HubEntry& e : delta) {
                if (e.hub >= v) continue;
                std::uint32_t idx = e.hub - base_;
                if (!weighted_) {
                    if (cand->test_and_set(v, idx, dirty)) {
                        em.send(v, {idx, e.dist + 1, std::uint8_t(to_in)});
                        ++lc.messages;
                    }
                } else {
                    DistanceSum nd = DistanceSum(e.dist) + wts[i];
                    if (nd >= kInfDistance) throw std::overflow_error("distance overflow");
                    // claimed earlier; the winning offer emits exactly once
                    if (table->get(v, idx) ==
                        CandidateDistTable::pack(static_cast<Distance>(nd), a)) {
                        em.send(v, {idx, static_cast<Distance>(nd), std::uint8_t(to_in)});
                        ++lc.messages;
                    }
                }
            }
        }
    }

    void do_claim(unsigned w, Rank a) {
        BvcLocal& lc = local_[w];
        auto offer_stream = [&](const std::vector<HubEntry>& delta,
                                std::span<const Rank> nbrs, std::span<const Weight> wts,
                                CandidateDistTable* table, std::vector<Rank>& dirty) {
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                Rank v = nbrs[i];
                for (const HubEntry& e : delta) {
                    if (e.hub >= v) continue;
                    DistanceSum nd = DistanceSum(e.dist) + wts[i];
                    if (nd >= kInfDistance) throw std::overflow_error("distance overflow");
                    table->offer(v, e.hub - base_,
                                 CandidateDistTable::pack(static_cast<Distance>(nd), a),
                                 dirty);
                }
            }
        };
        offer_stream(delta_in_[a], g_.neighbors(a), g_.weights(a), table_in_.get(),
                     lc.dirty_in);
        if (directed_)
            offer_stream(delta_out_[a], g_.in_neighbors(a), g_.in_weights(a),
                         table_out_.get(), lc.dirty_out);
    }

    void do_scatter(unsigned w, Rank a, Emitter& em) {
        send_stream(w, a, em, delta_in_[a], g_.neighbors(a), g_.weights(a), true);
        if (directed_)
            send_stream(w, a, em, delta_out_[a], g_.in_neighbors(a), g_.in_weights(a),
                        false);
    }

    // --- gather -------------------------------------------------------------

    void do_gather(unsigned w, Rank v, std::span<const Env> inbox) {
        BvcLocal& lc = local_[w];
        ++lc.edges;  // one grouped inbox service per destination per iteration
        const LabelStore& store = result_.labels;
        for (const Env& env : inbox) {
            const BvcMsg& msg = env.msg;
            Rank u = base_ + msg.hub_idx;
            Side target_side = msg.to_in ? Side::In : Side::Out;
            auto target = store.labels(v, target_side);
            if (weighted_) {
                // only strict improvements over the committed entry are checked
                auto pos = std::lower_bound(target.begin(), target.end(), u,
                                            [](const HubEntry& a, Rank h) {
                                                return a.hub < h;
                                            });
                if (pos != target.end() && pos->hub == u && pos->dist <= msg.dist)
                    continue;
            }
            const HubIndex& idx =
                msg.to_in ? index_out_[msg.hub_idx] : index_in_[msg.hub_idx];
            CheckOutcome out =
                batch_distance_check(target, idx.data(), msg.dist, base_, v);
            if (out.accept) {
                ++lc.pos;
                lc.scan_pos += out.scanned;
                lc.pos_inb += out.scanned_inbatch;
                (msg.to_in ? pending_in_ : pending_out_)[v].push_back({u, msg.dist});
            } else {
                ++lc.neg;
                lc.scan_neg += out.scanned;
                lc.neg_inb += out.scanned_inbatch;
                lc.neg_inb_batch += out.scanned_inbatch;
            }
        }
    }

    // --- commit -------------------------------------------------------------

    bool do_commit(unsigned w, Rank v) {
        BvcLocal& lc = local_[w];
        LabelStore& store = result_.labels;
        std::size_t accepted = pending_in_[v].size() +
                               (directed_ ? pending_out_[v].size() : 0);
        delta_in_[v].swap(pending_in_[v]);
        pending_in_[v].clear();
        if (directed_) {
            delta_out_[v].swap(pending_out_[v]);
            pending_out_[v].clear();
        }
        if (accepted == 0) return false;

        auto publish = [&](std::vector<HubEntry>& delta, Side side) {
            if (delta.empty()) return;
            std::sort(delta.begin(), delta.end(),
                      [](const HubEntry& a, const HubEntry& b) { return a.hub < b.hub; });
            merge_delta(store.mutable_labels(v, side), delta, weighted_);
            if (in_batch(v)) {
                HubIndex& idx = (side == Side::In && directed_) ? index_in_[v - base_]
                                                                : index_out_[v - base_];
                for (const HubEntry& e : delta) idx.set(e.hub, e.dist);
            }
        };
        publish(delta_in_[v], Side::In);
        if (directed_) publish(delta_out_[v], Side::Out);

        if (!directed_ && !weighted_) {
            if (group_sizes_[v].empty()) lc.committed.push_back(v);
            group_sizes_[v].push_back(static_cast<std::uint32_t>(delta_in_[v].size()));
        }
        if (accepted >= 2) ++lc.multi;
        return true;
    }

    // --- end of batch -------------------------------------------------------

    // Weighted finalization: drop every batch entry dominated by a
    // higher-priority hub. Witness values are read from the pre-recheck
    // snapshot; they are never below the true distances, so every removal is
    // sound and canonical entries always survive.
    std::uint64_t recheck_batch() {
        std::uint64_t removed = 0;
        auto sweep = [&](Rank v, Side side, const std::vector<HubIndex>& index_of) {
            auto& list = result_.labels.mutable_labels(v, side);
            std::vector<bool> drop(list.size(), false);
            bool any = false;
            for (std::size_t i = 0; i < list.size(); ++i) {
                Rank u = list[i].hub;
                if (u < base_ || u == v) continue;
                const HubIndex& idx = index_of[u - base_];
                for (std::size_t k = 0; k < i && list[k].hub < u; ++k) {
                    Distance dh = idx.at(list[k].hub);
                    if (dh != kInfDistance &&
                        DistanceSum(dh) + list[k].dist <= list[i].dist) {
                        drop[i] = any = true;
                        ++removed;
                        break;
                    }
                }
            }
            if (any) {
                std::size_t out = 0;
                for (std::size_t i = 0; i < list.size(); ++i)
                    if (!drop[i]) list[out++] = list[i];
                list.resize(out);
            }
        };
        for (BvcLocal& lc : local_) {
            for (Rank v : lc.dirty_in) sweep(v, Side::In, index_out_);
            for (Rank v : lc.dirty_out) sweep(v, Side::Out, index_in_);
        }
        return removed;
    }

    void finish_batch(std::size_t b) {
        CounterReport& c = result_.counters;
        for (BvcLocal& lc : local_) {
            c.messages_sent += lc.messages;
            c.edge_accesses += lc.edges;
            c.checks_positive += lc.pos;
            c.checks_negative += lc.neg;
            c.scan_len_positive += lc.scan_pos;
            c.scan_len_negative += lc.scan_neg;
            c.scan_pos_inbatch += lc.pos_inb;
            c.scan_neg_inbatch += lc.neg_inb;
            c.neg_inbatch_per_batch[b] += lc.neg_inb_batch;
            c.multi_delta_commits += lc.multi;
            lc.messages = lc.edges = lc.pos = lc.neg = 0;
            lc.scan_pos = lc.scan_neg = lc.pos_inb = lc.neg_inb = 0;
            lc.neg_inb_batch = lc.multi = 0;

            for (Rank v : lc.committed) {
                auto& sizes = group_sizes_[v];
                std::uint64_t total = 0;
                for (std::uint32_t s : sizes) total += s;
                std::uint64_t cost = total * (total - 1) / 2;
                for (std::uint32_t s : sizes) cost -= std::uint64_t(s) * (s - 1) / 2;
                c.group_formula_inbatch += cost;
                if (opt_.collect_groups)
                    result_.groups[b].emplace_back(v, sizes);
                sizes.clear();
            }
            lc.committed.clear();

            for (Rank v : lc.dirty_in)
                weighted_ ? table_in_->clear_vertex(v) : cand_in_->clear_vertex(v);
            lc.dirty_in.clear();
            for (Rank v : lc.dirty_out)
                weighted_ ? table_out_->clear_vertex(v) : cand_out_->clear_vertex(v);
            lc.dirty_out.clear();
        }
        for (Rank u = base_; u < end_; ++u) {
            index_out_[u - base_].clear();
            if (directed_) index_in_[u - base_].clear();
        }
        if (opt_.collect_groups)
            std::sort(result_.groups[b].begin(), result_.groups[b].end());
    }
};

}  // namespace detail

inline BvcResult bvcpll(const Graph& g, const BvcOptions& opt = {}) {
    if (g.weighted()) throw std::invalid_argument("bvcpll: weighted input");
    if (g.directed()) throw std::invalid_argument("bvcpll: directed input");
    return detail::BvcRunner(g, opt, false).run();
}

inline BvcResult bvcpll_directed(const Graph& g, const BvcOptions& opt = {}) {
    if (!g.directed()) throw std::invalid_argument("bvcpll_directed: undirected input");
    return detail::BvcRunner(g, opt, g.weighted()).run();
}

// Unweighted inputs are legal and reproduce the plain batched labels with
// unit weights.
inline BvcResult bvcpll_weighted(const Graph& g, const BvcOptions& opt = {}) {
    if (g.directed()) throw std::invalid_argument("bvcpll_weighted: directed input");
    return detail::BvcRunner(g, opt, true).run();
}

}  // namespace hublab
