#pragma once

#include <span>
#include <vector>

#include "hublab/label_store.hpp"
#include "hublab/types.hpp"

namespace hublab {

// Direct-indexed distance array over hub ranks with dirty-list reset. Used as
// the resident index H(u) over a labeling vertex's own list: one O(1) lookup
// per scanned target entry, O(|entries|) build and clear.
class HubIndex {
public:
    explicit HubIndex(std::size_t n = 0) : dist_(n, kInfDistance) {}

    void resize(std::size_t n) {
        dist_.assign(n, kInfDistance);
        dirty_.clear();
    }

    void set(Rank hub, Distance d) {
        if (dist_[hub] == kInfDistance) dirty_.push_back(hub);
        dist_[hub] = d;
    }

    std::size_t build(std::span<const HubEntry> labels) {
        for (const HubEntry& e : labels) set(e.hub, e.dist);
        return labels.size();
    }

    const Distance* data() const { return dist_.data(); }
    Distance at(Rank hub) const { return dist_[hub]; }

    void clear() {
        for (Rank h : dirty_) dist_[h] = kInfDistance;
        dirty_.clear();
    }

private:
    std::vector<Distance> dist_;
    std::vector<Rank> dirty_;
};

struct CheckOutcome {
    bool accept;
    std::uint32_t scanned;          // target entries examined (self entry excluded)
    std::uint32_t scanned_inbatch;  // of those, hubs in the arriving hub's batch
};

// The canonical-criterion test: accept (u, d) at the target iff no common hub
// h of u and the target witnesses d(u,h) + d(h,target) <= d.
//
// Scans the target's sorted list once, looking each hub up in the index over
// L(u). A rejecting scan stops at the first witness; an accepting scan reads
// the whole list. The target's own self entry is skipped: it could witness
// only if target were a hub of u, which the rank filter rules out.
inline CheckOutcome batch_distance_check(std::span<const HubEntry> target_labels,
                                         const Distance* hub_index, DistanceSum d,
                                         Rank batch_base = kInvalidRank,
                                         Rank target = kInvalidRank) {
    CheckOutcome out{true, 0, 0};
    for (const HubEntry& e : target_labels) {
        if (e.hub == target) continue;
        ++out.scanned;
        if (batch_base != kInvalidRank && e.hub >= batch_base) ++out.scanned_inbatch;
        Distance dh = hub_index[e.hub];
        if (dh != kInfDistance && DistanceSum(dh) + e.dist <= d) {
            out.accept = false;
            break;
        }
    }
    return out;
}

}  // namespace hublab
