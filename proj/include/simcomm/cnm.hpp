#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "simcomm/graph.hpp"
#include "simcomm/partition.hpp"
#include "simcomm/trace.hpp"

// Greedy modularity agglomeration (Clauset, Newman & Moore) and the hybrid
// driver that seeds it with one node-similarity round.
//
// Plain CNM joins low-degree nodes early, because at the start every e_ij
// term is equal and the degree penalty decides. The hybrid replaces that
// stage with one round of most-similar linking.
//
// Gains are kept as exact integers: ΔQ_ij = (2m·e_ij − d_i·d_j) / (2m²), and
// Q itself as (4m·Σe_ii − Σd_i²) / (4m²). Equal gains therefore compare equal,
// and ties go to the lexicographically largest pair (i, j), i < j.

namespace simcomm {

/// Max-heap of candidate joins with lazy invalidation. An item is current
/// only while both of its communities still carry the versions it recorded.
class MergeHeap {
public:
    struct Item {
        Count key;  // 2m·e_ij − d_i·d_j
        BlockId i;  // i < j
        BlockId j;
        std::uint32_t version_i;
        std::uint32_t version_j;
    };

    void push(const Item& item) { heap_.push(item); }
    bool empty() const { return heap_.empty(); }
    const Item& top() const { return heap_.top(); }
    void pop() { heap_.pop(); }
    std::size_t size() const { return heap_.size(); }
    /// Replaces the contents with `items`.
    void assign(std::vector<Item> items) { heap_ = Queue(Lower{}, std::move(items)); }

    /// Strict priority: larger key first, then larger (i, j).
    static bool before(const Item& a, const Item& b) {
        if (a.key != b.key) return a.key > b.key;
        if (a.i != b.i) return a.i > b.i;
        return a.j > b.j;
    }

private:
    struct Lower {
        bool operator()(const Item& a, const Item& b) const { return before(b, a); }
    };
    using Queue = std::priority_queue<Item, std::vector<Item>, Lower>;
    Queue heap_;
};

/// Joins the pair of maximal gain until no two communities touch, negative
/// gains included. Records Q after every join and returns the best division
/// (earliest on ties). Throws NoEdgesError when m = 0 and
/// std::invalid_argument when `initial` does not fit the graph.
RunResult cnm_run(const Graph& g, const Partition& initial);

/// cnm_run seeded with xcz_one_round. The trace holds the singleton start
/// and the one-round division as XCZ records, then the CNM joins.
RunResult hybrid_run(const Graph& g, unsigned threads = 1);

}  // namespace simcomm
