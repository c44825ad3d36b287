#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "simcomm/graph.hpp"
#include "simcomm/partition.hpp"

namespace simcomm {

/// Sparse symmetric similarity values, stored once per unordered pair as
/// (i, j) with i < j. Row i holds its partners j > i in ascending order.
class SimilarityTable {
public:
    struct Entry {
        BlockId i;
        BlockId j;
        double value;
    };

    SimilarityTable() = default;
    explicit SimilarityTable(std::size_t h) : block_count_(h) { offsets_.reserve(h + 1); }

    std::size_t block_count() const { return block_count_; }
    std::size_t size() const { return values_.size(); }

    /// Rows not yet appended read as empty.
    std::span<const BlockId> partners(BlockId i) const {
        if (i + 1 >= offsets_.size()) return {};
        return {partners_.data() + offsets_[i], partners_.data() + offsets_[i + 1]};
    }
    std::span<const double> values(BlockId i) const {
        if (i + 1 >= offsets_.size()) return {};
        return {values_.data() + offsets_[i], values_.data() + offsets_[i + 1]};
    }

    /// s_ij for either argument order; 0 when the pair is absent.
    double at(BlockId i, BlockId j) const;

    /// All entries in ascending (i, j) order.
    std::vector<Entry> entries() const;

    /// Builds a table from arbitrary entries (any order, either orientation).
    /// Duplicate pairs and non-positive values are rejected.
    static SimilarityTable from_entries(std::size_t h, std::vector<Entry> entries);

    /// Appends row `i`; rows must be appended in ascending order.
    void append_row(std::span<const BlockId> partners, std::span<const double> values);

private:
    std::size_t block_count_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<BlockId> partners_;
    std::vector<double> values_;
};

/// s_ij = (e_ij + Σ_k √(e_ik·e_kj)/|V_k|) / √(d_i·d_j), the sum taken over
/// common quotient neighbors in ascending k. Zero when either block has no
/// degree. Symmetric to the last bit. Throws std::invalid_argument for i == j.
double subgraph_similarity(const QuotientGraph& q, std::span<const std::size_t> sizes, BlockId i, BlockId j);

/// s_xy = (a_xy + n_xy) / √(k_x·k_y); zero for isolated nodes.
double node_similarity(const Graph& g, NodeId x, NodeId y);

/// Unordered pairs at quotient distance 1 or 2, each once, ascending.
std::vector<std::pair<BlockId, BlockId>> candidate_pairs(const QuotientGraph& q);

/// subgraph_similarity over every candidate pair. Rows are split across
/// `threads` workers; the result does not depend on the thread count.
SimilarityTable similarity_table(const QuotientGraph& q, std::span<const std::size_t> sizes, unsigned threads = 1);

/// node_similarity over every pair of nodes within distance 2.
SimilarityTable node_similarity_table(const Graph& g, unsigned threads = 1);

/// out[i] lists, ascending, each j with s_ij > 0 and s_ij >= max_j' s_ij'·(1 − tolerance).
/// Values are bitwise those of similarity_table, but no table is kept.
std::vector<std::vector<BlockId>> maximal_partners(const QuotientGraph& q, std::span<const std::size_t> sizes,
                                                   double tolerance, unsigned threads = 1);

/// The same selection over node_similarity.
std::vector<std::vector<NodeId>> maximal_node_partners(const Graph& g, double tolerance, unsigned threads = 1);

}  // namespace simcomm
