#include "simcomm/xcz.hpp"

#include <chrono>

#include "simcomm/disjoint_set.hpp"

namespace simcomm {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool is_maximal(double value, double row_max) {
    return row_max > 0.0 && value >= row_max * (1.0 - kTieTolerance);
}

}  // namespace

RoundLinks most_similar_links(const SimilarityTable& table, std::size_t h) {
    std::vector<double> row_max(h, 0.0);
    for (BlockId i = 0; i < table.block_count(); ++i) {
        auto partners = table.partners(i);
        auto values = table.values(i);
        for (std::size_t k = 0; k < partners.size(); ++k) {
            row_max[i] = std::max(row_max[i], values[k]);
            row_max[partners[k]] = std::max(row_max[partners[k]], values[k]);
        }
    }
    RoundLinks links;
    links.arcs.resize(h);
    // Rows ascend in i and partners ascend within a row, so every arcs list comes out sorted.
    for (BlockId i = 0; i < table.block_count(); ++i) {
        auto partners = table.partners(i);
        auto values = table.values(i);
        for (std::size_t k = 0; k < partners.size(); ++k) {
            const BlockId j = partners[k];
            if (is_maximal(values[k], row_max[i])) links.arcs[i].push_back(j);
            if (is_maximal(values[k], row_max[j])) links.arcs[j].push_back(i);
        }
    }
    return links;
}

BlockGrouping link_components(const RoundLinks& links, std::size_t h) {
    DisjointSet sets(h);
    for (std::size_t i = 0; i < links.arcs.size(); ++i)
        for (BlockId j : links.arcs[i]) sets.unite(i, j);
    std::vector<std::size_t> roots(h);
    for (std::size_t i = 0; i < h; ++i) roots[i] = sets.find(i);
    return grouping_from_labels(roots);
}

RunResult xcz_run(const Graph& g, const XczOptions& options) {
    const Count m = static_cast<Count>(g.edge_count());
    if (m == 0) throw NoEdgesError();
    const auto start = Clock::now();

    RunResult result;
    Partition current = singleton_partition(g);
    QuotientGraph quotient;

    auto record = [&](std::size_t round, double q) {
        result.trace.rounds.push_back({Phase::xcz, round, current.block_count(), q});
        if (round == 0 || q > result.trace.best_q()) {
            result.trace.best_index = result.trace.rounds.size() - 1;
            result.best = current;
        }
        if (options.on_division) options.on_division(current, quotient);
    };
    // Singletons have no internal edges, so Q is -Σ(k_x/2m)², summed as modularity() would.
    if (options.on_division) quotient = build_quotient(g, current);
    const double md = static_cast<double>(m);
    double q0 = 0.0;
    for (NodeId x = 0; x < g.node_count(); ++x) {
        const double share = static_cast<double>(g.degree(x)) / (2.0 * md);
        q0 += 0.0 / md - share * share;
    }
    record(0, q0);

    for (std::size_t round = 1; current.block_count() > 1; ++round) {
        auto t0 = Clock::now();
        const RoundLinks links{round == 1 ? maximal_node_partners(g, kTieTolerance, options.threads)
                                          : maximal_partners(quotient, current.sizes(), kTieTolerance, options.threads)};
        result.trace.times.similarity_ms += elapsed_ms(t0);

        t0 = Clock::now();
        const std::size_t h = current.block_count();
        const BlockGrouping groups = link_components(links, h);
        if (groups.group_count == h) {
            result.trace.times.merge_ms += elapsed_ms(t0);
            break;
        }
        if (round == 1) {
            current = Partition(std::vector<BlockId>(groups.group_of.begin(), groups.group_of.end()));
            quotient = build_quotient(g, current);
        } else {
            Merged merged = merge_blocks(current, quotient, groups);
            current = std::move(merged.partition);
            quotient = std::move(merged.quotient);
        }
        result.trace.times.merge_ms += elapsed_ms(t0);
        record(round, *modularity(quotient, m));
    }
    result.trace.times.total_ms = elapsed_ms(start);
    return result;
}

Partition xcz_one_round(const Graph& g, unsigned threads) {
    if (g.edge_count() == 0) throw NoEdgesError();
    const std::size_t n = g.node_count();
    const BlockGrouping groups = link_components({maximal_node_partners(g, kTieTolerance, threads)}, n);
    std::vector<BlockId> assignment(groups.group_of.begin(), groups.group_of.end());
    return Partition(std::move(assignment));
}

}  // namespace simcomm
