#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace hublab {

// External vertex identity as it appears in edge-list files. Ids may be
// sparse; everything past the parser works on dense ranks instead.
using VertexId = std::uint32_t;

// Position of a vertex in the total order. Rank 0 is the highest-priority
// vertex and is labeled first. Lower rank always means higher priority.
using Rank = std::uint32_t;

using Weight = std::uint32_t;

// Distances are bounded unsigned integers; kInfDistance marks "no path" and
// is only ever returned from queries, never stored in a label entry.
using Distance = std::uint32_t;
inline constexpr Distance kInfDistance = std::numeric_limits<Distance>::max();

inline constexpr Rank kInvalidRank = std::numeric_limits<Rank>::max();

// Sums of two distances can exceed 32 bits; comparisons are done in 64-bit.
using DistanceSum = std::uint64_t;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace hublab
