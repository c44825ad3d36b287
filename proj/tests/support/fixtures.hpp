#pragma once

#include <filesystem>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "simcomm/graph.hpp"
#include "simcomm/partition.hpp"
#include "simcomm/trace.hpp"

namespace simcomm::fixtures {

inline std::filesystem::path data_dir() { return SIMCOMM_TEST_DATA; }

inline Graph graph(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges) {
    std::vector<std::pair<NodeId, NodeId>> list(edges);
    return Graph::from_edges(n, list);
}

inline Graph single_edge() { return graph(2, {{0, 1}}); }
inline Graph path3() { return graph(3, {{0, 1}, {1, 2}}); }
inline Graph path4() { return graph(4, {{0, 1}, {1, 2}, {2, 3}}); }
inline Graph triangle() { return graph(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline Graph cycle4() { return graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

/// Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
inline Graph two_triangles() { return graph(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}}); }
inline Partition triangle_split() { return Partition({0, 0, 0, 1, 1, 1}); }

inline Partition one_block(std::size_t n) { return Partition(std::vector<BlockId>(n, 0)); }

inline LoadedGraph parse_edges(const std::string& text) {
    std::istringstream in(text);
    return load_edge_list(in);
}

inline LoadedGraph parse_gml(const std::string& text) {
    std::istringstream in(text);
    return load_gml(in);
}

/// Groups each planted block by its majority community and counts the
/// blocks whose majority community is theirs alone.
inline std::size_t recovered_blocks(const Partition& found, const std::vector<std::size_t>& planted,
                                    std::size_t blocks) {
    std::vector<std::vector<std::size_t>> tally(blocks, std::vector<std::size_t>(found.block_count(), 0));
    for (NodeId x = 0; x < found.node_count(); ++x) ++tally[planted[x]][found.block_of(x)];
    std::vector<std::size_t> majority(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < tally[b].size(); ++c)
            if (tally[b][c] > tally[b][best]) best = c;
        majority[b] = best;
    }
    std::size_t recovered = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        bool unique = true;
        for (std::size_t o = 0; o < blocks; ++o)
            if (o != b && majority[o] == majority[b]) unique = false;
        if (unique) ++recovered;
    }
    return recovered;
}

}  // namespace simcomm::fixtures
