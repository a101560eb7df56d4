#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hublab/types.hpp"

namespace hublab {

// Edge list exactly as read from the input, before any cleaning. Duplicates
// and self-loops are kept so that build_graph owns the cleanup rules.
struct RawGraph {
    struct Edge {
        VertexId u;
        VertexId v;
        Weight w;  // 1 when the graph is unweighted
    };

    bool directed = false;
    bool weighted = false;
    std::vector<Edge> edges;
};

// Text format: one edge per line, "u v" or "u v w", whitespace separated.
// Lines starting with '#' are comments; blank lines are ignored.
inline RawGraph parse_edge_list(std::istream& in, bool directed, bool weighted) {
    RawGraph raw;
    raw.directed = directed;
    raw.weighted = weighted;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;

        std::istringstream ls(line);
        long long u = 0, v = 0, w = 1;
        if (!(ls >> u >> v)) throw ParseError(lineno, "expected two vertex ids");
        if (u < 0 || v < 0) throw ParseError(lineno, "negative vertex id");
        if (u > std::numeric_limits<VertexId>::max() - 1 ||
            v > std::numeric_limits<VertexId>::max() - 1)
            throw ParseError(lineno, "vertex id out of range");

        long long extra;
        if (weighted) {
            if (!(ls >> w)) throw ParseError(lineno, "missing edge weight");
            if (w < 1) throw ParseError(lineno, "edge weight must be >= 1");
            if (w > std::numeric_limits<Weight>::max() - 1)
                throw ParseError(lineno, "edge weight out of range");
        } else if (ls >> extra) {
            throw ParseError(lineno, "unexpected weight token");
        }
        if (weighted && (ls >> extra)) throw ParseError(lineno, "trailing tokens");

        raw.edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v),
                             static_cast<Weight>(w)});
    }
    return raw;
}

// Bijection between original ids and ranks. Rank 0 is the highest priority.
struct VertexOrder {
    std::vector<VertexId> id_of;                  // rank -> original id
    std::unordered_map<VertexId, Rank> rank_of;   // original id -> rank

    std::size_t size() const { return id_of.size(); }

    Rank rank(VertexId id) const {
        auto it = rank_of.find(id);
        if (it == rank_of.end())
            throw std::out_of_range("vertex id " + std::to_string(id) +
                                    " not covered by the order");
        return it->second;
    }
};

// Ranks by descending degree on the cleaned simple graph (self-loops dropped,
// parallel edges counted once; directed degree = in + out). Ties break by
// ascending original id so the order is deterministic.
inline VertexOrder degree_order(const RawGraph& raw) {
    std::unordered_map<VertexId, std::size_t> index;
    std::vector<VertexId> ids;
    auto intern = [&](VertexId id) {
        auto [it, fresh] = index.emplace(id, ids.size());
        if (fresh) ids.push_back(id);
        return it->second;
    };

    std::vector<std::pair<std::size_t, std::size_t>> simple;
    simple.reserve(raw.edges.size());
    for (const auto& e : raw.edges) {
        std::size_t a = intern(e.u);
        std::size_t b = intern(e.v);
        if (a == b) continue;
        if (!raw.directed && a > b) std::swap(a, b);
        simple.emplace_back(a, b);
    }
    std::sort(simple.begin(), simple.end());
    simple.erase(std::unique(simple.begin(), simple.end()), simple.end());

    std::vector<std::size_t> degree(ids.size(), 0);
    for (auto [a, b] : simple) {
        ++degree[a];
        ++degree[b];
    }

    std::vector<std::size_t> by_degree(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) by_degree[i] = i;
    std::sort(by_degree.begin(), by_degree.end(), [&](std::size_t a, std::size_t b) {
        if (degree[a] != degree[b]) return degree[a] > degree[b];
        return ids[a] < ids[b];
    });

    VertexOrder order;
    order.id_of.resize(ids.size());
    order.rank_of.reserve(ids.size());
    for (Rank r = 0; r < by_degree.size(); ++r) {
        order.id_of[r] = ids[by_degree[r]];
        order.rank_of.emplace(ids[by_degree[r]], r);
    }
    return order;
}

// Immutable rank-permuted adjacency. Neighbor lists are strictly increasing
// in rank; undirected edges are stored in both endpoints' lists. After
// construction the structure is read-only and safe to share across threads.
class Graph {
public:
    Graph() = default;

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    bool directed() const { return directed_; }
    bool weighted() const { return weighted_; }
    const VertexOrder& order() const { return order_; }

    // Outgoing adjacency (the only adjacency for undirected graphs).
    std::span<const Rank> neighbors(Rank v) const {
        return {nbrs_.data() + offsets_[v], nbrs_.data() + offsets_[v + 1]};
    }
    std::span<const Weight> weights(Rank v) const {
        return {wts_.data() + offsets_[v], wts_.data() + offsets_[v + 1]};
    }

    std::span<const Rank> in_neighbors(Rank v) const {
        if (!directed_) return neighbors(v);
        return {in_nbrs_.data() + in_offsets_[v], in_nbrs_.data() + in_offsets_[v + 1]};
    }
    std::span<const Weight> in_weights(Rank v) const {
        if (!directed_) return weights(v);
        return {in_wts_.data() + in_offsets_[v], in_wts_.data() + in_offsets_[v + 1]};
    }

    std::size_t degree(Rank v) const { return offsets_[v + 1] - offsets_[v]; }

    // Stable 64-bit identity of the cleaned graph; used to refuse counter
    // comparisons across different inputs.
    std::uint64_t fingerprint() const { return fingerprint_; }

    friend Graph build_graph(const RawGraph& raw, const VertexOrder& order);

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    bool directed_ = false;
    bool weighted_ = false;
    VertexOrder order_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Rank> nbrs_;
    std::vector<Weight> wts_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<Rank> in_nbrs_;
    std::vector<Weight> in_wts_;
    std::uint64_t fingerprint_ = 0;

    static void build_csr(std::size_t n,
                          const std::vector<std::pair<Rank, Rank>>& arcs,
                          const std::vector<Weight>& arc_w,
                          std::vector<std::size_t>& offsets,
                          std::vector<Rank>& nbrs, std::vector<Weight>& wts) {
        offsets.assign(n + 1, 0);
        for (auto [s, t] : arcs) ++offsets[s + 1];
        for (std::size_t i = 1; i <= n; ++i) offsets[i] += offsets[i - 1];
        nbrs.resize(arcs.size());
        wts.resize(arcs.size());
        std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            std::size_t slot = cursor[arcs[i].first]++;
            nbrs[slot] = arcs[i].second;
            wts[slot] = arc_w[i];
        }
    }
};

// Cleans and freezes a RawGraph: self-loops dropped, parallel edges collapsed
// to the minimum weight, adjacency remapped to ranks and sorted. Neither
// cleanup rule changes any shortest-path distance.
inline Graph build_graph(const RawGraph& raw, const VertexOrder& order) {
    Graph g;
    g.n_ = order.size();
    g.directed_ = raw.directed;
    g.weighted_ = raw.weighted;
    g.order_ = order;

    // (u, v) -> min weight, with u < v for undirected graphs
    struct Pair {
        Rank a, b;
        Weight w;
    };
    std::vector<Pair> cleaned;
    cleaned.reserve(raw.edges.size());
    for (const auto& e : raw.edges) {
        Rank a = order.rank(e.u);
        Rank b = order.rank(e.v);
        if (a == b) continue;
        if (!raw.directed && a > b) std::swap(a, b);
        cleaned.push_back({a, b, e.w});
    }
    std::sort(cleaned.begin(), cleaned.end(), [](const Pair& x, const Pair& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.w < y.w;
    });
    cleaned.erase(std::unique(cleaned.begin(), cleaned.end(),
                              [](const Pair& x, const Pair& y) {
                                  return x.a == y.a && x.b == y.b;
                              }),
                  cleaned.end());
    g.m_ = cleaned.size();

    std::vector<std::pair<Rank, Rank>> arcs;
    std::vector<Weight> arc_w;
    arcs.reserve(cleaned.size() * (raw.directed ? 1 : 2));
    arc_w.reserve(arcs.capacity());
    for (const auto& p : cleaned) {
        arcs.emplace_back(p.a, p.b);
        arc_w.push_back(p.w);
        if (!raw.directed) {
            arcs.emplace_back(p.b, p.a);
            arc_w.push_back(p.w);
        }
    }
    Graph::build_csr(g.n_, arcs, arc_w, g.offsets_, g.nbrs_, g.wts_);
    for (Rank v = 0; v < g.n_; ++v) {
        auto s = g.offsets_[v], e = g.offsets_[v + 1];
        // per-source ranges arrive sorted by construction; assert in debug
        for (std::size_t i = s + 1; i < e; ++i)
            if (g.nbrs_[i - 1] >= g.nbrs_[i])
                throw std::logic_error("adjacency not strictly increasing");
    }

    if (raw.directed) {
        std::vector<std::pair<Rank, Rank>> rev;
        std::vector<Weight> rev_w;
        rev.reserve(cleaned.size());
        rev_w.reserve(cleaned.size());
        // reverse arcs sorted by (target-as-source, source) to keep lists sorted
        std::vector<Pair> rcl = cleaned;
        std::sort(rcl.begin(), rcl.end(), [](const Pair& x, const Pair& y) {
            if (x.b != y.b) return x.b < y.b;
            return x.a < y.a;
        });
        for (const auto& p : rcl) {
            rev.emplace_back(p.b, p.a);
            rev_w.push_back(p.w);
        }
        Graph::build_csr(g.n_, rev, rev_w, g.in_offsets_, g.in_nbrs_, g.in_wts_);
    }

    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (i * 8)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(g.n_);
    mix(g.m_);
    mix((g.directed_ ? 1 : 0) | (g.weighted_ ? 2 : 0));
    for (Rank v : g.nbrs_) mix(v);
    if (g.weighted_)
        for (Weight w : g.wts_) mix(w);
    g.fingerprint_ = h;
    return g;
}

inline Graph build_graph(const RawGraph& raw) {
    return build_graph(raw, degree_order(raw));
}

}  // namespace hublab
