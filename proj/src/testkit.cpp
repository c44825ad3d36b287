#include "simcomm/testkit.hpp"

#include <cmath>
#include <stdexcept>

namespace simcomm::testkit {
namespace {

// Calls emit(index) for each index in [0, total) kept with probability p,
// skipping ahead geometrically between hits.
template <typename Emit>
void sample_pairs(std::uint64_t total, double p, Rng& rng, Emit emit) {
    if (p <= 0.0 || total == 0) return;
    if (p >= 1.0) {
        for (std::uint64_t k = 0; k < total; ++k) emit(k);
        return;
    }
    const double log_miss = std::log1p(-p);
    std::uint64_t index = 0;
    for (;;) {
        const double skip = std::floor(std::log1p(-rng.uniform()) / log_miss);
        if (skip >= static_cast<double>(total - index)) return;
        index += static_cast<std::uint64_t>(skip);
        emit(index);
        if (++index >= total) return;
    }
}

// Index k in [0, s(s-1)/2) to the pair (u, v), u < v, in row-major order.
std::pair<std::uint64_t, std::uint64_t> triangle_pair(std::uint64_t k, std::uint64_t s) {
    // Row u holds s-1-u pairs; find u with a closed form and correct rounding drift.
    const double sd = static_cast<double>(s);
    auto u = static_cast<std::uint64_t>(
        std::floor(sd - 0.5 - std::sqrt((sd - 0.5) * (sd - 0.5) - 2.0 * static_cast<double>(k))));
    auto row_start = [s](std::uint64_t r) { return r * (2 * s - r - 1) / 2; };
    while (u > 0 && row_start(u) > k) --u;
    while (row_start(u + 1) <= k) ++u;
    return {u, u + 1 + (k - row_start(u))};
}

}  // namespace

void check_spec(const PlantedPartitionSpec& spec) {
    if (spec.blocks == 0 || spec.block_size == 0) throw std::invalid_argument("blocks and block_size must be positive");
    if (!(spec.p_out >= 0.0 && spec.p_out < spec.p_in && spec.p_in <= 1.0))
        throw std::invalid_argument("need 0 <= p_out < p_in <= 1");
}

PlantedGraph planted_partition(const PlantedPartitionSpec& spec) {
    check_spec(spec);
    Rng rng(spec.seed);
    const std::uint64_t s = spec.block_size;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::uint64_t a = 0; a < spec.blocks; ++a) {
        sample_pairs(s * (s - 1) / 2, spec.p_in, rng, [&](std::uint64_t k) {
            auto [u, v] = triangle_pair(k, s);
            edges.emplace_back(static_cast<NodeId>(a * s + u), static_cast<NodeId>(a * s + v));
        });
    }
    for (std::uint64_t a = 0; a < spec.blocks; ++a) {
        for (std::uint64_t b = a + 1; b < spec.blocks; ++b) {
            sample_pairs(s * s, spec.p_out, rng, [&](std::uint64_t k) {
                edges.emplace_back(static_cast<NodeId>(a * s + k / s), static_cast<NodeId>(b * s + k % s));
            });
        }
    }
    PlantedGraph out;
    out.graph = Graph::from_edges(spec.node_count(), edges);
    out.labels.resize(spec.node_count());
    for (std::size_t x = 0; x < out.labels.size(); ++x) out.labels[x] = x / spec.block_size;
    return out;
}

Graph random_graph(std::size_t n, double p, Rng& rng) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId x = 0; x < n; ++x)
        for (NodeId y = x + 1; y < n; ++y)
            if (rng.uniform() < p) edges.emplace_back(x, y);
    return Graph::from_edges(n, edges);
}

Partition random_partition(std::size_t n, std::size_t max_blocks, Rng& rng) {
    std::vector<std::size_t> raw(n);
    for (auto& b : raw) b = rng.below(max_blocks);
    // Dense renumbering in order of first appearance.
    std::vector<BlockId> rename(max_blocks, ~BlockId{0});
    std::vector<BlockId> assignment(n);
    BlockId next = 0;
    for (std::size_t x = 0; x < n; ++x) {
        if (rename[raw[x]] == ~BlockId{0}) rename[raw[x]] = next++;
        assignment[x] = rename[raw[x]];
    }
    return Partition(std::move(assignment));
}

BestPartition brute_force_best_partition(const Graph& g) {
    const std::size_t n = g.node_count();
    const Count m = static_cast<Count>(g.edge_count());
    if (n > kBruteForceMaxNodes) throw std::invalid_argument("brute force is limited to 12 nodes");
    if (m == 0) throw std::invalid_argument("modularity is undefined without edges");

    std::vector<BlockId> assign(n, 0);
    std::vector<Count> inside(n + 1, 0);
    std::vector<Count> degree(n + 1, 0);
    std::vector<BlockId> best_assign;
    Count best_numerator = 0;
    bool have_best = false;

    // Q·4m² = 4m·Σinside − Σdegree², compared exactly as integers.
    auto evaluate = [&](std::size_t blocks) {
        Count numerator = 0;
        for (std::size_t b = 0; b < blocks; ++b) numerator += 4 * m * inside[b] - degree[b] * degree[b];
        if (!have_best || numerator > best_numerator) {
            best_numerator = numerator;
            best_assign = assign;
            have_best = true;
        }
    };

    auto recurse = [&](auto&& self, NodeId x, std::size_t blocks) -> void {
        if (x == n) {
            evaluate(blocks);
            return;
        }
        for (BlockId b = 0; b <= blocks; ++b) {
            Count links = 0;
            for (NodeId y : g.neighbors(x))
                if (y < x && assign[y] == b) ++links;
            assign[x] = b;
            inside[b] += links;
            degree[b] += g.degree(x);
            self(self, x + 1, b == blocks ? blocks + 1 : blocks);
            inside[b] -= links;
            degree[b] -= g.degree(x);
        }
    };
    recurse(recurse, 0, 0);

    const double md = static_cast<double>(m);
    return {Partition(std::move(best_assign)), static_cast<double>(best_numerator) / (4.0 * md * md)};
}

SimilarityTable naive_similarity(const QuotientGraph& q, std::span<const std::size_t> sizes) {
    const std::size_t h = q.block_count();
    if (h > kNaiveSimilarityMaxBlocks) throw std::invalid_argument("naive similarity is limited to 200 blocks");
    std::vector<std::vector<Count>> e(h, std::vector<Count>(h, 0));
    for (std::size_t i = 0; i < h; ++i)
        for (auto [j, c] : q.rows[i]) e[i][j] = c;

    std::vector<SimilarityTable::Entry> entries;
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = i + 1; j < h; ++j) {
            const Count di = q.degree_sum[i];
            const Count dj = q.degree_sum[j];
            if (di == 0 || dj == 0) continue;
            double shared = 0.0;
            for (std::size_t k = 0; k < h; ++k)
                shared += std::sqrt(static_cast<double>(e[i][k] * e[k][j])) / static_cast<double>(sizes[k]);
            const double s = (static_cast<double>(e[i][j]) + shared) / std::sqrt(static_cast<double>(di * dj));
            if (s > 0.0) entries.push_back({static_cast<BlockId>(i), static_cast<BlockId>(j), s});
        }
    }
    return SimilarityTable::from_entries(h, std::move(entries));
}

}  // namespace simcomm::testkit
