#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace simcomm {

using NodeId = std::uint32_t;
using Count = std::int64_t;

struct DropCounts {
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
};

/// Undirected simple graph in CSR layout. Neighbor lists are sorted and
/// contain no duplicates or self-loops; the graph never changes after
/// construction.
class Graph {
public:
    Graph() = default;

    /// Builds a simple graph on `n` nodes. Self-loops and repeated edges are
    /// dropped and tallied in `drops` when given.
    static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                            DropCounts* drops = nullptr);

    /// Adopts raw CSR arrays without checking them. Only meant for feeding
    /// deliberately broken graphs to validate().
    static Graph from_csr_unchecked(std::vector<std::size_t> offsets, std::vector<NodeId> neighbors);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return neighbors_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId x) const {
        return {neighbors_.data() + offsets_[x], neighbors_.data() + offsets_[x + 1]};
    }
    Count degree(NodeId x) const { return static_cast<Count>(offsets_[x + 1] - offsets_[x]); }

    /// a_xy, by binary search in the shorter row.
    bool adjacent(NodeId x, NodeId y) const;

    /// |adj(x) ∩ adj(y)| by linear merge of the sorted rows.
    Count common_neighbors(NodeId x, NodeId y) const;

    /// Edges (x, y) with x < y in ascending order.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
};

/// Bijection between original node labels and dense ids.
class LabelMap {
public:
    /// Returns the id for `label`, assigning the next dense id on first sight.
    NodeId intern(std::string_view label);

    bool contains(std::string_view label) const { return ids_.contains(std::string(label)); }
    NodeId id(std::string_view label) const;
    const std::string& label(NodeId id) const { return labels_.at(id); }
    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }

    friend bool operator==(const LabelMap& a, const LabelMap& b) { return a.labels_ == b.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> ids_;
};

struct LoadedGraph {
    Graph graph;
    LabelMap labels;
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_duplicates = 0;

    std::size_t dropped() const { return dropped_self_loops + dropped_duplicates; }
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Whitespace-separated label pairs, one per line; blank lines and lines
/// starting with '#' are skipped. Labels get ids in first-appearance order.
LoadedGraph load_edge_list(std::istream& in);

/// The GML subset `graph [ node [ id N label "S" ] ... edge [ source N target N ] ... ]`.
/// Nodes get ids in declaration order; unknown keys (directed, value, ...) are ignored.
LoadedGraph load_gml(std::istream& in);

/// Writes one `label label` line per edge in ascending (x, y) id order.
void write_edge_list(std::ostream& out, const Graph& g, const LabelMap& labels);

struct ValidationReport {
    std::vector<std::string> violations;
    std::size_t components = 0;

    bool valid() const { return violations.empty(); }
};

/// Checks the simple-graph invariants and counts connected components.
ValidationReport validate(const Graph& g);

/// Component index per node, numbered in order of each component's smallest node.
std::vector<NodeId> connected_components(const Graph& g, std::size_t* count = nullptr);

}  // namespace simcomm
