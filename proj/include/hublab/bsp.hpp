#pragma once

#include <atomic>
#include <barrier>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hublab/active_set.hpp"
#include "hublab/types.hpp"

namespace hublab {

// Work distribution for one bulk-synchronous run: worker count and the chunk
// of active vertices a thread grabs at a time (dynamic scheduling).
struct BspSchedule {
    unsigned threads = 1;
    std::size_t chunk = 64;
};

struct PhaseTimes {
    double scatter_seconds = 0.0;
    double gather_seconds = 0.0;
    double commit_seconds = 0.0;
};

class BspError : public std::runtime_error {
public:
    BspError(std::uint64_t iteration, const std::string& what)
        : std::runtime_error("bsp iteration " + std::to_string(iteration) + ": " + what),
          iteration_(iteration) {}
    std::uint64_t iteration() const { return iteration_; }

private:
    std::uint64_t iteration_;
};

// Shared-memory bulk-synchronous scatter/gather executor.
//
// One iteration runs scatter / barrier / gather / barrier / commit / barrier
// until the next active set is empty. Contract for the callbacks:
//  - scatter(worker, v, emitter) reads v's own state plus shared immutable
//    data and communicates only through emitter.send.
//  - gather(worker, v, envelopes) sees v's inbox sorted by source rank and
//    writes only v's own state. Nothing written after the scatter-closing
//    barrier is visible to it.
//  - commit(worker, v) publishes v's pending update for the next iteration
//    and returns whether v is active in it.
//
// Messages are staged in thread-local buffers during scatter and merged at
// the phase barrier, so the multiset of (destination, message) pairs per
// iteration does not depend on the thread count. A thread count of 1 executes
// identical semantics.
template <typename Msg>
class BspEngine {
public:
    struct Envelope {
        Rank dest;
        Rank src;
        Msg msg;
    };

    class Emitter {
    public:
        void send(Rank dest, const Msg& msg) { buf_->push_back({dest, src_, msg}); }

    private:
        friend class BspEngine;
        std::vector<Envelope>* buf_ = nullptr;
        Rank src_ = kInvalidRank;
    };

    explicit BspEngine(std::size_t n) : n_(n), inbox_(n) {}

    const PhaseTimes& phase_times() const { return times_; }

    // Runs until the active set is empty; returns the number of iterations
    // executed. `actives` is consumed. The optional claim pass runs over the
    // same active vertices with a barrier before scatter; the weighted
    // algorithms use it to resolve message ownership deterministically.
    template <typename Scatter, typename Gather, typename Commit,
              typename Claim = std::nullptr_t>
    std::uint64_t run(ActiveSet& actives, Scatter&& scatter, Gather&& gather,
                      Commit&& commit, const BspSchedule& schedule,
                      Claim&& claim = nullptr) {
        constexpr bool has_claim = !std::is_same_v<std::decay_t<Claim>, std::nullptr_t>;
        unsigned threads = schedule.threads == 0 ? 1 : schedule.threads;
        std::size_t chunk = schedule.chunk == 0 ? 1 : schedule.chunk;

        outbox_.assign(threads, {});
        staged_active_.assign(threads, {});
        iteration_ = 0;
        stop_ = false;
        error_ = nullptr;

        std::barrier sync(threads);

        auto worker = [&](unsigned w) {
            for (;;) {
                if (w == 0) prepare_iteration(actives);
                sync.arrive_and_wait();
                if (stop_) break;

                auto t0 = std::chrono::steady_clock::now();
                if constexpr (has_claim) {
                    guarded(w, [&] {
                        for_chunks(claim_cursor_, active_list_, chunk,
                                   [&](Rank v) { claim(w, v); });
                    });
                    sync.arrive_and_wait();
                }
                guarded(w, [&] {
                    Emitter em;
                    em.buf_ = &outbox_[w];
                    for_chunks(scatter_cursor_, active_list_, chunk, [&](Rank v) {
                        em.src_ = v;
                        scatter(w, v, em);
                    });
                });
                sync.arrive_and_wait();

                auto t1 = std::chrono::steady_clock::now();
                if (w == 0) route(threads);
                sync.arrive_and_wait();

                auto t2 = std::chrono::steady_clock::now();
                guarded(w, [&] {
                    for_chunks(gather_cursor_, touched_, chunk, [&](Rank v) {
                        gather(w, v, std::span<const Envelope>(inbox_[v]));
                    });
                });
                sync.arrive_and_wait();

                auto t3 = std::chrono::steady_clock::now();
                guarded(w, [&] {
                    for_chunks(commit_cursor_, touched_, chunk, [&](Rank v) {
                        if (commit(w, v)) staged_active_[w].push_back(v);
                    });
                });
                sync.arrive_and_wait();
                if (w == 0) {
                    finish_iteration(actives, threads);
                    auto t4 = std::chrono::steady_clock::now();
                    times_.scatter_seconds += std::chrono::duration<double>(t1 - t0).count();
                    times_.gather_seconds += std::chrono::duration<double>(t3 - t2).count();
                    times_.commit_seconds += std::chrono::duration<double>(t4 - t3).count();
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(threads - 1);
        for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker, w);
        worker(0);
        for (auto& t : pool) t.join();

        if (error_) {
            try {
                std::rethrow_exception(error_);
            } catch (const std::exception& e) {
                throw BspError(iteration_, e.what());
            }
        }
        return iteration_;
    }

private:
    std::size_t n_;
    std::vector<std::vector<Envelope>> inbox_;
    std::vector<std::vector<Envelope>> outbox_;       // per worker
    std::vector<std::vector<Rank>> staged_active_;    // per worker
    std::vector<Rank> active_list_;
    std::vector<Rank> touched_;
    std::atomic<std::size_t> claim_cursor_{0};
    std::atomic<std::size_t> scatter_cursor_{0};
    std::atomic<std::size_t> gather_cursor_{0};
    std::atomic<std::size_t> commit_cursor_{0};
    std::uint64_t iteration_ = 0;
    bool stop_ = false;
    std::exception_ptr error_ = nullptr;
    std::mutex error_mutex_;
    PhaseTimes times_;

    template <typename Fn>
    void guarded(unsigned, Fn&& fn) {
        if (error_) return;  // an earlier phase failed; drain to the barriers
        try {
            fn();
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }

    template <typename Fn>
    void for_chunks(std::atomic<std::size_t>& cursor, const std::vector<Rank>& items,
                    std::size_t chunk, Fn&& fn) {
        for (;;) {
            std::size_t begin = cursor.fetch_add(chunk, std::memory_order_relaxed);
            if (begin >= items.size()) break;
            std::size_t end = std::min(items.size(), begin + chunk);
            for (std::size_t i = begin; i < end; ++i) fn(items[i]);
        }
    }

    void prepare_iteration(ActiveSet& actives) {
        if (error_) stop_ = true;
        if (stop_ || actives.empty()) {
            stop_ = true;
            return;
        }
        ++iteration_;
        active_list_ = actives.drain();
        claim_cursor_ = 0;
        scatter_cursor_ = 0;
    }

    void route(unsigned threads) {
        for (unsigned t = 0; t < threads; ++t) {
            for (const Envelope& env : outbox_[t]) {
                if (inbox_[env.dest].empty()) touched_.push_back(env.dest);
                inbox_[env.dest].push_back(env);
            }
            outbox_[t].clear();
        }
        for (Rank v : touched_)
            std::stable_sort(inbox_[v].begin(), inbox_[v].end(),
                             [](const Envelope& a, const Envelope& b) {
                                 return a.src < b.src;
                             });
        gather_cursor_ = 0;
        commit_cursor_ = 0;
    }

    void finish_iteration(ActiveSet& actives, unsigned threads) {
        for (unsigned t = 0; t < threads; ++t) {
            for (Rank v : staged_active_[t]) actives.insert(v);
            staged_active_[t].clear();
        }
        for (Rank v : touched_) inbox_[v].clear();
        touched_.clear();
    }
};

}  // namespace hublab
