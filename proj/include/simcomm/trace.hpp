#pragma once

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "simcomm/partition.hpp"

namespace simcomm {

/// Raised by every algorithm entry point when the graph has no edges.
class NoEdgesError : public std::invalid_argument {
public:
    NoEdgesError() : std::invalid_argument("no edges") {}
};

enum class Phase { xcz, cnm };

constexpr std::string_view phase_name(Phase p) { return p == Phase::xcz ? "xcz" : "cnm"; }

/// One recorded division. `round` counts per phase: merge rounds for XCZ,
/// single joins for CNM; 0 is the division the phase started from.
struct RoundRecord {
    Phase phase;
    std::size_t round;
    std::size_t h;
    double q;
};

struct PhaseTimes {
    double similarity_ms = 0.0;
    double merge_ms = 0.0;
    double total_ms = 0.0;
};

/// A CNM join. Ids are the starting division's block ids; a community keeps
/// the smallest id among its members, so `survivor` < `absorbed`.
struct Join {
    BlockId survivor;
    BlockId absorbed;
    double delta_q;
};

struct RunTrace {
    std::vector<RoundRecord> rounds;
    /// CNM joins in order; record k+1 of the CNM phase follows join k.
    std::vector<Join> joins;
    std::size_t best_index = 0;
    PhaseTimes times;

    const RoundRecord& best() const { return rounds.at(best_index); }
    double best_q() const { return best().q; }
};

struct RunResult {
    Partition best;
    RunTrace trace;
};

}  // namespace simcomm
