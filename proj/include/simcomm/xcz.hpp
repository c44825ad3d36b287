#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "simcomm/graph.hpp"
#include "simcomm/partition.hpp"
#include "simcomm/similarity.hpp"
#include "simcomm/trace.hpp"

namespace simcomm {

/// Relative slack under which two similarities count as the same maximum.
inline constexpr double kTieTolerance = 1e-12;

/// arcs[i] lists, ascending, every j whose similarity to i is maximal and
/// positive. A block with no positive similarity has no arcs.
struct RoundLinks {
    std::vector<std::vector<BlockId>> arcs;
};

RoundLinks most_similar_links(const SimilarityTable& table, std::size_t h);

/// Connected components of the links taken as undirected edges.
BlockGrouping link_components(const RoundLinks& links, std::size_t h);

struct XczOptions {
    unsigned threads = 1;
    /// Called with every recorded division, the singleton start included.
    std::function<void(const Partition&, const QuotientGraph&)> on_division;
};

/// Agglomerates from singletons: each round links every block to its most
/// similar blocks and merges the linked components. Stops at one block or
/// when a round merges nothing. Returns the division of highest modularity,
/// the earliest on ties. Throws NoEdgesError when m = 0.
RunResult xcz_run(const Graph& g, const XczOptions& options = {});

/// One linking round from singletons using node similarity. Every node with
/// an edge ends in a block of at least two; isolated nodes stay alone.
Partition xcz_one_round(const Graph& g, unsigned threads = 1);

}  // namespace simcomm
