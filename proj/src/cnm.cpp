#include "simcomm/cnm.hpp"

#include <chrono>
#include <unordered_map>

#include "simcomm/disjoint_set.hpp"
#include "simcomm/xcz.hpp"

namespace simcomm {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

class GreedyJoiner {
public:
    GreedyJoiner(const Graph& g, const Partition& initial)
        : m_(static_cast<Count>(g.edge_count())), initial_(initial) {
        const QuotientGraph q = build_quotient(g, initial);
        const std::size_t h = q.block_count();
        rows_.resize(h);
        internal_ = q.internal;
        degree_ = q.degree_sum;
        version_.assign(h, 0);
        alive_.assign(h, 1);
        live_ = h;

        Count internal_total = 0;
        Count square_total = 0;
        for (BlockId i = 0; i < h; ++i) {
            rows_[i].reserve(q.rows[i].size());
            for (auto [j, e] : q.rows[i]) {
                rows_[i].emplace(j, e);
                if (i < j) {
                    push(i, j, e);
                    ++pairs_;
                }
            }
            internal_total += internal_[i];
            square_total += degree_[i] * degree_[i];
        }
        q_numerator_ = 4 * m_ * internal_total - square_total;
    }

    double q() const { return static_cast<double>(q_numerator_) / (4.0 * static_cast<double>(m_) * static_cast<double>(m_)); }
    std::size_t live() const { return live_; }

    /// Performs the best current join; false once no communities touch.
    bool step(Join& join) {
        while (!heap_.empty()) {
            const MergeHeap::Item top = heap_.top();
            heap_.pop();
            if (!alive_[top.i] || !alive_[top.j] || version_[top.i] != top.version_i ||
                version_[top.j] != top.version_j)
                continue;
            join = {top.i, top.j,
                    static_cast<double>(top.key) / (2.0 * static_cast<double>(m_) * static_cast<double>(m_))};
            absorb(top.i, top.j, top.key);
            return true;
        }
        return false;
    }

    Partition partition_after(std::span<const Join> joins) const {
        DisjointSet sets(initial_.block_count());
        for (const Join& j : joins) sets.unite(j.survivor, j.absorbed);
        std::vector<BlockId> assignment(initial_.node_count());
        for (NodeId x = 0; x < assignment.size(); ++x)
            assignment[x] = static_cast<BlockId>(sets.find(initial_.block_of(x)));
        std::vector<std::size_t> labels(assignment.begin(), assignment.end());
        BlockGrouping dense = grouping_from_labels(labels);
        return Partition(std::move(dense.group_of)).canonical();
    }

private:
    void push(BlockId i, BlockId j, Count e_ij) {
        if (j < i) std::swap(i, j);
        heap_.push({2 * m_ * e_ij - degree_[i] * degree_[j], i, j, version_[i], version_[j]});
    }

    // Folds community j into i (i < j). Rows are updated by the union rule
    // e_(i∪j)k = e_ik + e_jk, then every pair touching i gets a fresh key.
    void absorb(BlockId i, BlockId j, Count key) {
        auto& row_i = rows_[i];
        auto& row_j = rows_[j];
        const Count e_ij = row_i.at(j);
        row_i.erase(j);
        --pairs_;
        for (auto [k, e_jk] : row_j) {
            if (k == i) continue;
            auto [slot, fresh] = row_i.try_emplace(k, 0);
            if (!fresh) --pairs_;
            slot->second += e_jk;
            auto& row_k = rows_[k];
            row_k.erase(j);
            row_k[i] += e_jk;
        }
        std::unordered_map<BlockId, Count>().swap(row_j);

        q_numerator_ += 2 * key;
        internal_[i] += internal_[j] + e_ij;
        degree_[i] += degree_[j];
        alive_[j] = 0;
        ++version_[i];
        ++version_[j];
        --live_;
        for (auto [k, e_ik] : row_i) push(i, k, e_ik);
        if (heap_.size() > kHeapSlack * pairs_ + kHeapFloor) rebuild_heap();
    }

    // Every live pair has exactly one current item, so dropping the stale
    // ones leaves the order of joins unchanged.
    void rebuild_heap() {
        std::vector<MergeHeap::Item> items;
        items.reserve(pairs_);
        for (BlockId i = 0; i < rows_.size(); ++i) {
            if (!alive_[i]) continue;
            for (auto [k, e] : rows_[i])
                if (i < k) items.push_back({2 * m_ * e - degree_[i] * degree_[k], i, k, version_[i], version_[k]});
        }
        heap_.assign(std::move(items));
    }

    static constexpr std::size_t kHeapSlack = 4;
    static constexpr std::size_t kHeapFloor = 1 << 16;

    Count m_;
    const Partition& initial_;
    std::vector<std::unordered_map<BlockId, Count>> rows_;
    std::vector<Count> internal_;
    std::vector<Count> degree_;
    std::vector<std::uint32_t> version_;
    std::vector<char> alive_;
    std::size_t live_ = 0;
    std::size_t pairs_ = 0;
    Count q_numerator_ = 0;
    MergeHeap heap_;
};

// Runs the joins, appending records to `trace`. The starting division is
// recorded as CNM round 0 only when `record_start` is set.
Partition run_joins(const Graph& g, const Partition& initial, RunTrace& trace, bool record_start) {
    GreedyJoiner joiner(g, initial);
    if (record_start) trace.rounds.push_back({Phase::cnm, 0, joiner.live(), joiner.q()});

    Join join{};
    std::size_t best_joins = 0;
    double best_q = 0.0;
    bool have_best = false;
    if (record_start) {
        best_q = trace.rounds.back().q;
        have_best = true;
    }
    while (joiner.step(join)) {
        trace.joins.push_back(join);
        const double q = joiner.q();
        trace.rounds.push_back({Phase::cnm, trace.joins.size(), joiner.live(), q});
        if (!have_best || q > best_q) {
            best_q = q;
            best_joins = trace.joins.size();
            have_best = true;
        }
    }
    return joiner.partition_after(std::span(trace.joins).first(best_joins));
}

std::size_t best_index(const RunTrace& trace) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < trace.rounds.size(); ++k)
        if (trace.rounds[k].q > trace.rounds[best].q) best = k;
    return best;
}

}  // namespace

RunResult cnm_run(const Graph& g, const Partition& initial) {
    if (g.edge_count() == 0) throw NoEdgesError();
    if (initial.node_count() != g.node_count())
        throw std::invalid_argument("initial partition does not cover the graph");
    const auto start = Clock::now();
    RunResult result;
    result.best = run_joins(g, initial, result.trace, true);
    result.trace.best_index = best_index(result.trace);
    result.trace.times.merge_ms = elapsed_ms(start);
    result.trace.times.total_ms = result.trace.times.merge_ms;
    return result;
}

RunResult hybrid_run(const Graph& g, unsigned threads) {
    const Count m = static_cast<Count>(g.edge_count());
    if (m == 0) throw NoEdgesError();
    const auto start = Clock::now();
    RunResult result;
    RunTrace& trace = result.trace;

    const Partition singletons = singleton_partition(g);
    trace.rounds.push_back({Phase::xcz, 0, singletons.block_count(), *modularity(build_quotient(g, singletons), m)});

    auto t0 = Clock::now();
    const Partition seeded = xcz_one_round(g, threads);
    trace.times.similarity_ms = elapsed_ms(t0);
    trace.rounds.push_back({Phase::xcz, 1, seeded.block_count(), *modularity(build_quotient(g, seeded), m)});

    t0 = Clock::now();
    Partition joined = run_joins(g, seeded, trace, false);
    trace.times.merge_ms = elapsed_ms(t0);

    trace.best_index = best_index(trace);
    switch (trace.best_index) {
        case 0: result.best = singletons; break;
        case 1: result.best = seeded.canonical(); break;
        default: result.best = std::move(joined); break;
    }
    trace.times.total_ms = elapsed_ms(start);
    return result;
}

}  // namespace simcomm
