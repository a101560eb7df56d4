#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "hublab/graph.hpp"
#include "hublab/types.hpp"

namespace hublab {

// Deterministic test-corpus generators. Vertex ids are 1-based in the emitted
// edge lists; the same (model, params, seed) always yields the same file.

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

inline EdgeList gen_path(std::size_t n) {
    if (n == 0) throw std::invalid_argument("path: n must be >= 1");
    EdgeList edges;
    for (std::size_t i = 1; i < n; ++i)
        edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
    return edges;
}

inline EdgeList gen_star(std::size_t n) {
    if (n == 0) throw std::invalid_argument("star: n must be >= 1");
    EdgeList edges;
    for (std::size_t i = 2; i <= n; ++i)
        edges.emplace_back(VertexId{1}, static_cast<VertexId>(i));
    return edges;
}

inline EdgeList gen_grid(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("grid: empty side");
    auto id = [cols](std::size_t r, std::size_t c) {
        return static_cast<VertexId>(r * cols + c + 1);
    };
    EdgeList edges;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    return edges;
}

inline EdgeList gen_gnp(std::size_t n, double p, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("gnp: n must be >= 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gnp: p must be in [0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    EdgeList edges;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            if (coin(rng) < p)
                edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
    return edges;
}

// Preferential attachment: start from a (k+1)-clique, then each new vertex
// attaches to k distinct existing vertices sampled proportionally to degree.
inline EdgeList gen_ba(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("ba: n must be >= 1");
    if (k == 0) throw std::invalid_argument("ba: attachment count must be >= 1");
    std::size_t core = std::min(n, k + 1);
    EdgeList edges;
    std::vector<VertexId> stubs;  // one entry per edge endpoint
    for (std::size_t i = 1; i <= core; ++i)
        for (std::size_t j = i + 1; j <= core; ++j) {
            edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
            stubs.push_back(static_cast<VertexId>(i));
            stubs.push_back(static_cast<VertexId>(j));
        }
    std::mt19937_64 rng(seed);
    for (std::size_t v = core + 1; v <= n; ++v) {
        std::vector<VertexId> targets;
        while (targets.size() < k) {
            std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
            VertexId t = stubs[pick(rng)];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (VertexId t : targets) {
            edges.emplace_back(static_cast<VertexId>(v), t);
            stubs.push_back(static_cast<VertexId>(v));
            stubs.push_back(t);
        }
    }
    return edges;
}

inline std::vector<Weight> gen_weights(std::size_t count, Weight wmin, Weight wmax,
                                       std::uint64_t seed) {
    if (wmin < 1 || wmax < wmin) throw std::invalid_argument("bad weight range");
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<Weight> pick(wmin, wmax);
    std::vector<Weight> w(count);
    for (auto& x : w) x = pick(rng);
    return w;
}

inline void write_edge_list(std::ostream& out, const EdgeList& edges,
                            const std::vector<Weight>* weights = nullptr) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        out << edges[i].first << ' ' << edges[i].second;
        if (weights) out << ' ' << (*weights)[i];
        out << '\n';
    }
}

inline RawGraph raw_from_edges(const EdgeList& edges, bool directed = false,
                               const std::vector<Weight>* weights = nullptr) {
    RawGraph raw;
    raw.directed = directed;
    raw.weighted = weights != nullptr;
    raw.edges.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
        raw.edges.push_back({edges[i].first, edges[i].second,
                             weights ? (*weights)[i] : Weight{1}});
    return raw;
}

}  // namespace hublab
