#pragma once

#include <cstdint>
#include <vector>

#include "hublab/types.hpp"

namespace hublab {

// Frontier structure combining a membership bitmap with a dense queue.
// The bitmap gives O(1) membership tests; the queue remembers exactly which
// bits are set so clearing costs O(members), never O(n). Invariant: a bit is
// set iff the rank appears in the queue exactly once.
class ActiveSet {
public:
    explicit ActiveSet(std::size_t n = 0) { resize(n); }

    void resize(std::size_t n) {
        n_ = n;
        bits_.assign((n + 63) / 64, 0);
        queue_.clear();
    }

    std::size_t size() const { return queue_.size(); }
    bool empty() const { return queue_.empty(); }

    bool contains(Rank v) const { return bits_[v >> 6] >> (v & 63) & 1; }

    // Returns true when v was newly inserted.
    bool insert(Rank v) {
        std::uint64_t mask = std::uint64_t{1} << (v & 63);
        if (bits_[v >> 6] & mask) return false;
        bits_[v >> 6] |= mask;
        queue_.push_back(v);
        return true;
    }

    const std::vector<Rank>& members() const { return queue_; }

    // Empties the set and hands back the member list. Only bits named in the
    // queue are touched.
    std::vector<Rank> drain() {
        for (Rank v : queue_) bits_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
        clear_ops_ += queue_.size();
        std::vector<Rank> out;
        out.swap(queue_);
        return out;
    }

    void clear() {
        for (Rank v : queue_) bits_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
        clear_ops_ += queue_.size();
        queue_.clear();
    }

    // Number of per-member bit resets performed so far; lets tests verify the
    // clear cost is proportional to membership.
    std::uint64_t clear_ops() const { return clear_ops_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<Rank> queue_;
    std::uint64_t clear_ops_ = 0;
};

}  // namespace hublab
