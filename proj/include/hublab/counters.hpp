#pragma once

#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hublab/types.hpp"

namespace hublab {

// Uniform cost counters across all construction algorithms. All counts are
// thread-count invariant; wall_seconds is informational only and never part
// of any assertion.
//
// Conventions, pinned so runs are comparable across algorithms:
//  - messages_sent: sequential searches count one per queue push beyond the
//    root; vertex-centric runs count one per message actually delivered after
//    the rank and candidate filters.
//  - A distance check happens exactly once per delivered (deduplicated)
//    message, so checks_positive + checks_negative counts check invocations.
//  - scan_len_positive adds the full scanned length of the target list on an
//    accepting check; scan_len_negative adds the prefix scanned up to and
//    including the first witness on a rejecting check. The target's own self
//    entry is never scanned (it cannot witness anything).
//  - edge_accesses: sequential searches touch one edge per push, so the value
//    equals messages_sent there. Vertex-centric runs deliver messages grouped,
//    one access per (destination, iteration) inbox served.
//  - *_inbatch tallies count only scanned entries whose hub belongs to the
//    accounting batch of the hub being checked; they isolate the part of the
//    scan cost that differs between the sequential and batched schedules.
struct CounterReport {
    std::string algorithm;
    std::uint64_t graph_fingerprint = 0;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t batch_size = 0;  // 0 = no batch accounting
    std::uint64_t threads = 1;

    std::uint64_t messages_sent = 0;
    std::uint64_t edge_accesses = 0;
    std::uint64_t checks_positive = 0;
    std::uint64_t checks_negative = 0;
    std::uint64_t scan_len_positive = 0;
    std::uint64_t scan_len_negative = 0;
    std::uint64_t scan_pos_inbatch = 0;
    std::uint64_t scan_neg_inbatch = 0;
    // Closed form of the in-batch positive scan cost recomputed from the
    // arrival group sizes observed at commit time; must equal scan_pos_inbatch.
    std::uint64_t group_formula_inbatch = 0;
    std::uint64_t index_build_len = 0;  // per-check index construction cost
    std::uint64_t iterations = 0;       // BSP rounds; 0 for sequential runs
    std::uint64_t multi_delta_commits = 0;
    std::uint64_t recheck_removed = 0;

    std::vector<std::uint64_t> neg_inbatch_per_batch;

    double wall_seconds = 0.0;

    std::uint64_t checks_total() const { return checks_positive + checks_negative; }

    bool equal_counts(const CounterReport& o) const {
        return messages_sent == o.messages_sent && edge_accesses == o.edge_accesses &&
               checks_positive == o.checks_positive &&
               checks_negative == o.checks_negative &&
               scan_len_positive == o.scan_len_positive &&
               scan_len_negative == o.scan_len_negative &&
               scan_pos_inbatch == o.scan_pos_inbatch &&
               scan_neg_inbatch == o.scan_neg_inbatch &&
               group_formula_inbatch == o.group_formula_inbatch &&
               index_build_len == o.index_build_len && iterations == o.iterations &&
               multi_delta_commits == o.multi_delta_commits &&
               recheck_removed == o.recheck_removed &&
               neg_inbatch_per_batch == o.neg_inbatch_per_batch;
    }

    void print(std::ostream& out) const {
        out << "algorithm = " << algorithm << "\n";
        auto kv = [&out](const char* k, std::uint64_t v) {
            out << std::left << std::setw(22) << k << " = " << v << "\n";
        };
        kv("n", n);
        kv("m", m);
        kv("batch_size", batch_size);
        kv("threads", threads);
        kv("messages_sent", messages_sent);
        kv("edge_accesses", edge_accesses);
        kv("checks_positive", checks_positive);
        kv("checks_negative", checks_negative);
        kv("scan_len_positive", scan_len_positive);
        kv("scan_len_negative", scan_len_negative);
        kv("scan_pos_inbatch", scan_pos_inbatch);
        kv("scan_neg_inbatch", scan_neg_inbatch);
        kv("group_formula_inbatch", group_formula_inbatch);
        kv("index_build_len", index_build_len);
        kv("iterations", iterations);
        kv("multi_delta_commits", multi_delta_commits);
        kv("recheck_removed", recheck_removed);
        out << std::left << std::setw(22) << "wall_seconds" << " = " << wall_seconds
            << "\n";
    }

    // One counter per line: name<TAB>value. Stable order, machine readable.
    std::string to_tsv() const {
        std::ostringstream out;
        out << "algorithm\t" << algorithm << "\n"
            << "graph_fingerprint\t" << graph_fingerprint << "\n"
            << "n\t" << n << "\n"
            << "m\t" << m << "\n"
            << "batch_size\t" << batch_size << "\n"
            << "threads\t" << threads << "\n"
            << "messages_sent\t" << messages_sent << "\n"
            << "edge_accesses\t" << edge_accesses << "\n"
            << "checks_positive\t" << checks_positive << "\n"
            << "checks_negative\t" << checks_negative << "\n"
            << "scan_len_positive\t" << scan_len_positive << "\n"
            << "scan_len_negative\t" << scan_len_negative << "\n"
            << "scan_pos_inbatch\t" << scan_pos_inbatch << "\n"
            << "scan_neg_inbatch\t" << scan_neg_inbatch << "\n"
            << "group_formula_inbatch\t" << group_formula_inbatch << "\n"
            << "index_build_len\t" << index_build_len << "\n"
            << "iterations\t" << iterations << "\n"
            << "multi_delta_commits\t" << multi_delta_commits << "\n"
            << "recheck_removed\t" << recheck_removed << "\n"
            << "wall_seconds\t" << wall_seconds << "\n";
        return out.str();
    }
};

}  // namespace hublab
