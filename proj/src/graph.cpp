#include "simcomm/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace simcomm {

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                        DropCounts* drops) {
    std::vector<std::pair<NodeId, NodeId>> arcs;
    arcs.reserve(edges.size() * 2);
    std::size_t self_loops = 0;
    for (auto [x, y] : edges) {
        if (x >= n || y >= n) throw std::out_of_range("edge endpoint exceeds node count");
        if (x == y) {
            ++self_loops;
            continue;
        }
        arcs.emplace_back(x, y);
        arcs.emplace_back(y, x);
    }
    std::sort(arcs.begin(), arcs.end());
    const std::size_t before = arcs.size();
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    if (drops) {
        drops->self_loops = self_loops;
        drops->duplicates = (before - arcs.size()) / 2;
    }

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (auto [x, y] : arcs) ++g.offsets_[x + 1];
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.neighbors_.reserve(arcs.size());
    for (auto [x, y] : arcs) g.neighbors_.push_back(y);
    return g;
}

Graph Graph::from_csr_unchecked(std::vector<std::size_t> offsets, std::vector<NodeId> neighbors) {
    Graph g;
    g.offsets_ = std::move(offsets);
    g.neighbors_ = std::move(neighbors);
    return g;
}

bool Graph::adjacent(NodeId x, NodeId y) const {
    if (degree(y) < degree(x)) std::swap(x, y);
    auto row = neighbors(x);
    return std::binary_search(row.begin(), row.end(), y);
}

Count Graph::common_neighbors(NodeId x, NodeId y) const {
    auto a = neighbors(x);
    auto b = neighbors(y);
    Count shared = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++shared;
            ++i;
            ++j;
        }
    }
    return shared;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId x = 0; x < node_count(); ++x)
        for (NodeId y : neighbors(x))
            if (x < y) out.emplace_back(x, y);
    return out;
}

NodeId LabelMap::intern(std::string_view label) {
    auto [it, inserted] = ids_.try_emplace(std::string(label), static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.emplace_back(label);
    return it->second;
}

NodeId LabelMap::id(std::string_view label) const {
    auto it = ids_.find(std::string(label));
    if (it == ids_.end()) throw std::out_of_range("unknown label: " + std::string(label));
    return it->second;
}

std::vector<NodeId> connected_components(const Graph& g, std::size_t* count) {
    const std::size_t n = g.node_count();
    constexpr NodeId unseen = ~NodeId{0};
    std::vector<NodeId> comp(n, unseen);
    std::vector<NodeId> stack;
    NodeId next = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != unseen) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId x = stack.back();
            stack.pop_back();
            for (NodeId y : g.neighbors(x)) {
                if (y < n && comp[y] == unseen) {
                    comp[y] = next;
                    stack.push_back(y);
                }
            }
        }
        ++next;
    }
    if (count) *count = next;
    return comp;
}

ValidationReport validate(const Graph& g) {
    ValidationReport report;
    const std::size_t n = g.node_count();
    auto violation = [&](NodeId x, const std::string& what) {
        std::ostringstream msg;
        msg << "node " << x << ": " << what;
        report.violations.push_back(msg.str());
    };

    Count degree_sum = 0;
    for (NodeId x = 0; x < n; ++x) {
        auto row = g.neighbors(x);
        degree_sum += static_cast<Count>(row.size());
        for (std::size_t k = 0; k < row.size(); ++k) {
            NodeId y = row[k];
            if (y >= n) {
                violation(x, "neighbor id " + std::to_string(y) + " out of range");
                continue;
            }
            if (y == x) violation(x, "self-loop");
            if (k > 0 && row[k - 1] == y) violation(x, "duplicate edge to " + std::to_string(y));
            if (k > 0 && row[k - 1] > y) violation(x, "neighbor list not sorted");
            auto back = g.neighbors(y);
            if (!std::binary_search(back.begin(), back.end(), x) &&
                std::find(back.begin(), back.end(), x) == back.end())
                violation(x, "asymmetric edge to " + std::to_string(y));
        }
    }
    if (degree_sum != 2 * static_cast<Count>(g.edge_count()) || degree_sum % 2 != 0)
        report.violations.push_back("degree sum " + std::to_string(degree_sum) + " is not 2m");

    connected_components(g, &report.components);
    return report;
}

}  // namespace simcomm
