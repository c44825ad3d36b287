#include "simcomm/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace simcomm {

Partition::Partition(std::vector<BlockId> assignment) : assignment_(std::move(assignment)) {
    for (BlockId b : assignment_) {
        if (b >= sizes_.size()) sizes_.resize(static_cast<std::size_t>(b) + 1, 0);
        ++sizes_[b];
    }
    for (std::size_t b = 0; b < sizes_.size(); ++b)
        if (sizes_[b] == 0) throw std::invalid_argument("partition block " + std::to_string(b) + " is empty");
}

std::vector<std::vector<NodeId>> Partition::blocks() const {
    std::vector<std::vector<NodeId>> out(block_count());
    for (std::size_t b = 0; b < out.size(); ++b) out[b].reserve(sizes_[b]);
    for (NodeId x = 0; x < assignment_.size(); ++x) out[assignment_[x]].push_back(x);
    return out;
}

Partition Partition::canonical() const {
    constexpr BlockId unset = ~BlockId{0};
    std::vector<BlockId> rename(block_count(), unset);
    BlockId next = 0;
    std::vector<BlockId> out(assignment_.size());
    for (std::size_t x = 0; x < assignment_.size(); ++x) {
        BlockId& r = rename[assignment_[x]];
        if (r == unset) r = next++;
        out[x] = r;
    }
    return Partition(std::move(out));
}

Partition singleton_partition(const Graph& g) {
    std::vector<BlockId> a(g.node_count());
    for (std::size_t x = 0; x < a.size(); ++x) a[x] = static_cast<BlockId>(x);
    return Partition(std::move(a));
}

Count QuotientGraph::cross(BlockId i, BlockId j) const {
    if (i == j) return 0;
    const auto& row = rows[i].size() <= rows[j].size() ? rows[i] : rows[j];
    const BlockId key = rows[i].size() <= rows[j].size() ? j : i;
    auto it = std::lower_bound(row.begin(), row.end(), key,
                               [](const auto& entry, BlockId k) { return entry.first < k; });
    return it != row.end() && it->first == key ? it->second : 0;
}

QuotientGraph build_quotient(const Graph& g, const Partition& p) {
    if (p.node_count() != g.node_count())
        throw std::invalid_argument("partition covers " + std::to_string(p.node_count()) +
                                    " nodes, graph has " + std::to_string(g.node_count()));
    const std::size_t h = p.block_count();
    QuotientGraph q;
    q.rows.resize(h);
    q.internal.assign(h, 0);
    q.degree_sum.assign(h, 0);

    // Nodes bucketed by block, then each block's row gathered with a dense counter.
    std::vector<std::size_t> start(h + 1, 0);
    for (NodeId x = 0; x < g.node_count(); ++x) ++start[p.block_of(x) + 1];
    for (std::size_t b = 0; b < h; ++b) start[b + 1] += start[b];
    std::vector<NodeId> members(g.node_count());
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (NodeId x = 0; x < g.node_count(); ++x) members[fill[p.block_of(x)]++] = x;

    std::vector<Count> acc(h, 0);
    std::vector<BlockId> touched;
    for (BlockId b = 0; b < h; ++b) {
        for (std::size_t a = start[b]; a < start[b + 1]; ++a) {
            const NodeId x = members[a];
            q.degree_sum[b] += g.degree(x);
            for (NodeId y : g.neighbors(x)) {
                const BlockId by = p.block_of(y);
                if (by == b) {
                    if (x < y) ++q.internal[b];
                    continue;
                }
                if (acc[by] == 0) touched.push_back(by);
                ++acc[by];
            }
        }
        std::sort(touched.begin(), touched.end());
        auto& row = q.rows[b];
        row.reserve(touched.size());
        for (BlockId c : touched) {
            row.emplace_back(c, acc[c]);
            acc[c] = 0;
        }
        touched.clear();
    }
    return q;
}

bool is_conserved(const QuotientGraph& q, Count m) {
    const std::size_t h = q.block_count();
    if (q.internal.size() != h || q.degree_sum.size() != h) return false;
    Count edges = 0;
    Count degrees = 0;
    for (BlockId i = 0; i < h; ++i) {
        Count row_total = 0;
        BlockId prev = 0;
        bool first = true;
        for (auto [j, e] : q.rows[i]) {
            if (j >= h || j == i || e <= 0) return false;
            if (!first && j <= prev) return false;
            if (q.cross(j, i) != e) return false;
            first = false;
            prev = j;
            row_total += e;
            if (i < j) edges += e;
        }
        if (q.internal[i] < 0) return false;
        if (q.degree_sum[i] != 2 * q.internal[i] + row_total) return false;
        edges += q.internal[i];
        degrees += q.degree_sum[i];
    }
    return edges == m && degrees == 2 * m;
}

std::optional<double> modularity(const QuotientGraph& q, Count m) {
    if (m <= 0) return std::nullopt;
    const double md = static_cast<double>(m);
    double total = 0.0;
    for (std::size_t i = 0; i < q.block_count(); ++i) {
        const double share = static_cast<double>(q.degree_sum[i]) / (2.0 * md);
        total += static_cast<double>(q.internal[i]) / md - share * share;
    }
    return total;
}

double delta_q(const QuotientGraph& q, Count m, BlockId i, BlockId j) {
    if (i == j) throw std::invalid_argument("delta_q needs two distinct blocks");
    if (m <= 0) throw std::invalid_argument("delta_q is undefined without edges");
    const double md = static_cast<double>(m);
    const double ai = static_cast<double>(q.degree_sum[i]) / (2.0 * md);
    const double aj = static_cast<double>(q.degree_sum[j]) / (2.0 * md);
    return static_cast<double>(q.cross(i, j)) / md - 2.0 * ai * aj;
}

BlockGrouping grouping_from_labels(std::span<const std::size_t> labels) {
    std::size_t bound = 0;
    for (std::size_t l : labels) bound = std::max(bound, l + 1);
    constexpr BlockId unset = ~BlockId{0};
    std::vector<BlockId> rename(bound, unset);
    BlockGrouping out;
    out.group_of.resize(labels.size());
    BlockId next = 0;
    for (std::size_t b = 0; b < labels.size(); ++b) {
        BlockId& r = rename[labels[b]];
        if (r == unset) r = next++;
        out.group_of[b] = r;
    }
    out.group_count = next;
    return out;
}

BlockGrouping grouping_from_groups(std::span<const std::vector<BlockId>> groups, std::size_t h) {
    constexpr std::size_t unset = ~std::size_t{0};
    std::vector<std::size_t> label(h, unset);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) throw std::invalid_argument("empty group");
        for (BlockId b : groups[g]) {
            if (b >= h) throw std::invalid_argument("group member " + std::to_string(b) + " out of range");
            if (label[b] != unset) throw std::invalid_argument("block " + std::to_string(b) + " is in two groups");
            label[b] = g;
        }
    }
    for (std::size_t b = 0; b < h; ++b)
        if (label[b] == unset) throw std::invalid_argument("block " + std::to_string(b) + " is in no group");
    return grouping_from_labels(label);
}

Merged merge_blocks(const Partition& p, const QuotientGraph& q, const BlockGrouping& grouping) {
    const std::size_t h = q.block_count();
    if (grouping.group_of.size() != h || p.block_count() != h)
        throw std::invalid_argument("grouping does not match the partition");
    const std::size_t hn = grouping.group_count;

    std::vector<BlockId> assignment(p.node_count());
    for (NodeId x = 0; x < p.node_count(); ++x) assignment[x] = grouping.group_of[p.block_of(x)];

    Merged out{Partition(std::move(assignment)), {}};
    QuotientGraph& nq = out.quotient;
    nq.rows.resize(hn);
    nq.internal.assign(hn, 0);
    nq.degree_sum.assign(hn, 0);

    std::vector<std::vector<BlockId>> members(hn);
    for (BlockId b = 0; b < h; ++b) members[grouping.group_of[b]].push_back(b);

    std::vector<Count> acc(hn, 0);
    std::vector<BlockId> touched;
    for (BlockId g = 0; g < hn; ++g) {
        for (BlockId b : members[g]) {
            nq.internal[g] += q.internal[b];
            nq.degree_sum[g] += q.degree_sum[b];
            for (auto [c, e] : q.rows[b]) {
                const BlockId gc = grouping.group_of[c];
                if (gc == g) {
                    if (b < c) nq.internal[g] += e;
                    continue;
                }
                if (acc[gc] == 0) touched.push_back(gc);
                acc[gc] += e;
            }
        }
        std::sort(touched.begin(), touched.end());
        auto& row = nq.rows[g];
        row.reserve(touched.size());
        for (BlockId gc : touched) {
            row.emplace_back(gc, acc[gc]);
            acc[gc] = 0;
        }
        touched.clear();
    }
    return out;
}

Merged merge_blocks(const Partition& p, const QuotientGraph& q, std::span<const std::vector<BlockId>> groups) {
    return merge_blocks(p, q, grouping_from_groups(groups, q.block_count()));
}

}  // namespace simcomm
