#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "simcomm/graph.hpp"

namespace simcomm {

using BlockId = std::uint32_t;

/// A division of the nodes into h disjoint, non-empty blocks 0..h-1.
class Partition {
public:
    Partition() = default;

    /// Takes per-node block ids; they must cover 0..h-1 with no gaps.
    explicit Partition(std::vector<BlockId> assignment);

    std::size_t node_count() const { return assignment_.size(); }
    std::size_t block_count() const { return sizes_.size(); }
    BlockId block_of(NodeId x) const { return assignment_[x]; }
    std::size_t block_size(BlockId b) const { return sizes_[b]; }

    std::span<const BlockId> assignment() const { return assignment_; }
    std::span<const std::size_t> sizes() const { return sizes_; }

    /// Members of every block, each list ascending.
    std::vector<std::vector<NodeId>> blocks() const;

    /// Same division renumbered so block ids ascend with each block's smallest node.
    Partition canonical() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<BlockId> assignment_;
    std::vector<std::size_t> sizes_;
};

Partition singleton_partition(const Graph& g);

/// Weighted graph over the blocks of a partition.
///
/// `rows[i]` lists (j, e_ij) for every j != i with e_ij > 0, ascending in j;
/// each cross pair is stored in both rows. `internal[i]` is e_ii and
/// `degree_sum[i]` is d_i, the total degree of the block's nodes.
struct QuotientGraph {
    std::vector<std::vector<std::pair<BlockId, Count>>> rows;
    std::vector<Count> internal;
    std::vector<Count> degree_sum;

    std::size_t block_count() const { return rows.size(); }

    /// e_ij for i != j (0 when not adjacent); 0 for i == j as in the similarity formula.
    Count cross(BlockId i, BlockId j) const;

    friend bool operator==(const QuotientGraph&, const QuotientGraph&) = default;
};

/// One pass over the edges. Throws std::invalid_argument when the partition
/// does not cover the graph's nodes.
QuotientGraph build_quotient(const Graph& g, const Partition& p);

/// True when Σe_ii + Σ_{i<j}e_ij = m, Σd_i = 2m, and d_i = 2e_ii + Σ_j e_ij for each i.
bool is_conserved(const QuotientGraph& q, Count m);

/// Q = Σ_i (e_ii/m − (d_i/2m)²), summed in ascending block order.
/// Returns nullopt when m = 0, where modularity is undefined.
std::optional<double> modularity(const QuotientGraph& q, Count m);

/// Gain from joining blocks i and j: e_ij/m − 2(d_i/2m)(d_j/2m).
/// Throws std::invalid_argument for i == j or m <= 0.
double delta_q(const QuotientGraph& q, Count m, BlockId i, BlockId j);

/// For each old block, the id of the group it joins. Groups are numbered
/// 0..count-1 in ascending order of their smallest member block.
struct BlockGrouping {
    std::vector<BlockId> group_of;
    std::size_t group_count = 0;
};

/// Turns arbitrary per-block labels into a BlockGrouping numbered by smallest member.
BlockGrouping grouping_from_labels(std::span<const std::size_t> labels);

/// Validates an explicit list of groups (disjoint, covering 0..h-1).
/// Throws std::invalid_argument otherwise.
BlockGrouping grouping_from_groups(std::span<const std::vector<BlockId>> groups, std::size_t h);

struct Merged {
    Partition partition;
    QuotientGraph quotient;
};

/// Coarsens `p` by `grouping`. The new quotient is aggregated from `q`
/// without touching the graph's edges.
Merged merge_blocks(const Partition& p, const QuotientGraph& q, const BlockGrouping& grouping);
Merged merge_blocks(const Partition& p, const QuotientGraph& q, std::span<const std::vector<BlockId>> groups);

}  // namespace simcomm
