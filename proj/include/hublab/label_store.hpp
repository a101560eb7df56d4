#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hublab/types.hpp"

namespace hublab {

// One hub label: the hub's rank and the exact shortest-path distance between
// hub and owner. Within a vertex's list, hub ranks are strictly ascending and
// never exceed the owner's rank; equality happens only for the (self, 0)
// entry, which is therefore always last.
struct HubEntry {
    Rank hub;
    Distance dist;

    friend bool operator==(const HubEntry&, const HubEntry&) = default;
};

// Entries appended to one vertex during one gather invocation. In unweighted
// runs all entries of a delta share the same distance (the iteration number).
using DeltaLabel = std::vector<HubEntry>;

enum class Side { Out, In };

// Per-vertex hub lists, the output of every construction algorithm and the
// query index. Undirected stores use only the Out side; directed stores keep
// L_out (hubs the vertex reaches) and L_in (hubs reaching the vertex).
class LabelStore {
public:
    LabelStore() = default;
    LabelStore(std::size_t n, bool directed = false, bool weighted = false)
        : directed_(directed), weighted_(weighted), out_(n) {
        if (directed) in_.resize(n);
    }

    std::size_t n() const { return out_.size(); }
    bool directed() const { return directed_; }
    bool weighted() const { return weighted_; }

    std::span<const HubEntry> labels(Rank v, Side side = Side::Out) const {
        check_rank(v);
        return side == Side::In && directed_ ? std::span<const HubEntry>(in_[v])
                                             : std::span<const HubEntry>(out_[v]);
    }

    // Mutable access for construction algorithms. The concurrency contract is
    // single-writer per vertex within a phase.
    std::vector<HubEntry>& mutable_labels(Rank v, Side side = Side::Out) {
        return side == Side::In && directed_ ? in_[v] : out_[v];
    }

    // Inserts delta entries keeping ascending hub order. New hubs are not
    // guaranteed to rank above everything present, so this is a sorted merge.
    // A duplicate hub signals an algorithm bug and is rejected.
    void append_delta(Rank v, std::span<const HubEntry> delta, Side side = Side::Out) {
        check_rank(v);
        auto& list = side == Side::In && directed_ ? in_[v] : out_[v];
        for (const HubEntry& e : delta) {
            auto pos = std::lower_bound(list.begin(), list.end(), e.hub,
                                        [](const HubEntry& a, Rank h) { return a.hub < h; });
            if (pos != list.end() && pos->hub == e.hub)
                throw std::logic_error("duplicate hub " + std::to_string(e.hub) +
                                       " in label of vertex " + std::to_string(v));
            list.insert(pos, e);
        }
    }

    // Exact distance by merge-join over the two sorted hub lists. Touches at
    // most |L(u)| + |L(v)| entries; the optional counter reports how many.
    Distance query_distance(Rank u, Rank v, std::size_t* visited = nullptr) const {
        check_rank(u);
        check_rank(v);
        std::span<const HubEntry> lu(out_[u]);
        std::span<const HubEntry> lv = directed_ ? std::span<const HubEntry>(in_[v])
                                                 : std::span<const HubEntry>(out_[v]);
        DistanceSum best = kInfDistance;
        std::size_t i = 0, j = 0, touched = 0;
        while (i < lu.size() && j < lv.size()) {
            ++touched;
            if (lu[i].hub == lv[j].hub) {
                DistanceSum sum = DistanceSum(lu[i].dist) + lv[j].dist;
                best = std::min(best, sum);
                ++i;
                ++j;
            } else if (lu[i].hub < lv[j].hub) {
                ++i;
            } else {
                ++j;
            }
        }
        if (visited) *visited += touched;
        return best >= kInfDistance ? kInfDistance : static_cast<Distance>(best);
    }

    struct Stats {
        std::size_t n = 0;
        std::size_t total_entries = 0;
        double mean_label_size = 0.0;  // 0 for an empty store
        std::size_t max_label_size = 0;
    };

    Stats stats() const {
        Stats s;
        s.n = out_.size();
        for (const auto& l : out_) {
            s.total_entries += l.size();
            s.max_label_size = std::max(s.max_label_size, l.size());
        }
        for (const auto& l : in_) {
            s.total_entries += l.size();
            s.max_label_size = std::max(s.max_label_size, l.size());
        }
        if (s.n > 0) s.mean_label_size = double(s.total_entries) / double(s.n);
        return s;
    }

    friend bool operator==(const LabelStore&, const LabelStore&) = default;

    // --- binary persistence ------------------------------------------------
    // Layout: magic "HLB1"; flags byte (bit0 directed, bit1 weighted);
    // n as u64 LE; then per vertex in rank order (directed: L_out then L_in):
    // entry count u32 LE, entries as (hub u32 LE, dist u32 LE).

    void save(std::ostream& out) const {
        out.write("HLB1", 4);
        char flags = char((directed_ ? 1 : 0) | (weighted_ ? 2 : 0));
        out.write(&flags, 1);
        write_u64(out, out_.size());
        for (Rank v = 0; v < out_.size(); ++v) {
            write_list(out, out_[v]);
            if (directed_) write_list(out, in_[v]);
        }
        if (!out) throw std::runtime_error("label write failed");
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path + " for writing");
        save(f);
    }

    static LabelStore load(std::istream& in) {
        char magic[4];
        in.read(magic, 4);
        if (!in || std::string(magic, 4) != "HLB1")
            throw std::runtime_error("bad label file magic");
        char flags = 0;
        in.read(&flags, 1);
        if (!in) throw std::runtime_error("truncated label file");
        std::uint64_t n = read_u64(in);
        if (n > std::numeric_limits<Rank>::max())
            throw std::runtime_error("label file vertex count out of range");
        LabelStore store(static_cast<std::size_t>(n), flags & 1, flags & 2);
        for (Rank v = 0; v < n; ++v) {
            read_list(in, store.out_[v], v, n);
            if (store.directed_) read_list(in, store.in_[v], v, n);
        }
        return store;
    }

    static LabelStore load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path);
        return load(f);
    }

private:
    bool directed_ = false;
    bool weighted_ = false;
    std::vector<std::vector<HubEntry>> out_;
    std::vector<std::vector<HubEntry>> in_;

    void check_rank(Rank v) const {
        if (v >= out_.size())
            throw std::out_of_range("rank " + std::to_string(v) + " out of range");
    }

    static void write_u32(std::ostream& out, std::uint32_t x) {
        char b[4] = {char(x), char(x >> 8), char(x >> 16), char(x >> 24)};
        out.write(b, 4);
    }
    static void write_u64(std::ostream& out, std::uint64_t x) {
        write_u32(out, std::uint32_t(x));
        write_u32(out, std::uint32_t(x >> 32));
    }
    static std::uint32_t read_u32(std::istream& in) {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        if (!in) throw std::runtime_error("truncated label file");
        return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
               std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
    }
    static std::uint64_t read_u64(std::istream& in) {
        std::uint64_t lo = read_u32(in);
        std::uint64_t hi = read_u32(in);
        return lo | hi << 32;
    }
    static void write_list(std::ostream& out, const std::vector<HubEntry>& list) {
        write_u32(out, std::uint32_t(list.size()));
        for (const HubEntry& e : list) {
            write_u32(out, e.hub);
            write_u32(out, e.dist);
        }
    }
    static void read_list(std::istream& in, std::vector<HubEntry>& list, Rank owner,
                          std::uint64_t n) {
        std::uint32_t count = read_u32(in);
        list.resize(count);
        Rank prev = kInvalidRank;
        for (std::uint32_t i = 0; i < count; ++i) {
            list[i].hub = read_u32(in);
            list[i].dist = read_u32(in);
            if (list[i].hub >= n)
                throw std::runtime_error("label entry hub out of range");
            if (list[i].dist == kInfDistance)
                throw std::runtime_error("label entry with infinite distance");
            if (prev != kInvalidRank && list[i].hub <= prev)
                throw std::runtime_error("label list not strictly ascending");
            if (list[i].hub > owner)
                throw std::runtime_error("hub ranked below its owner");
            if (list[i].hub == owner && list[i].dist != 0)
                throw std::runtime_error("self entry with nonzero distance");
            prev = list[i].hub;
        }
    }
};

}  // namespace hublab
