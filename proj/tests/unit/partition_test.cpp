#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "simcomm/partition.hpp"
#include "simcomm/testkit.hpp"

using namespace simcomm;

namespace {

using Row = std::vector<std::pair<BlockId, Count>>;

// Q straight from the node-level definition: (1/2m) Σ_xy [A_xy − k_x k_y / 2m] δ(c_x, c_y).
double node_level_modularity(const Graph& g, const Partition& p) {
    const double m2 = 2.0 * static_cast<double>(g.edge_count());
    double sum = 0.0;
    for (NodeId x = 0; x < g.node_count(); ++x)
        for (NodeId y = 0; y < g.node_count(); ++y)
            if (p.block_of(x) == p.block_of(y))
                sum += (g.adjacent(x, y) ? 1.0 : 0.0) - static_cast<double>(g.degree(x) * g.degree(y)) / m2;
    return sum / m2;
}

}  // namespace

TEST_CASE("partition construction") {
    Partition p({1, 0, 1, 2});
    CHECK(p.block_count() == 3);
    CHECK(p.block_size(1) == 2);
    CHECK(p.blocks() == std::vector<std::vector<NodeId>>{{1}, {0, 2}, {3}});
    CHECK(p.canonical() == Partition({0, 1, 0, 2}));
    CHECK_THROWS_AS(Partition({0, 2}), std::invalid_argument);

    auto s = singleton_partition(fixtures::graph(6, {}));
    CHECK(s.block_count() == 6);
    for (std::size_t size : s.sizes()) CHECK(size == 1);
    CHECK(singleton_partition(Graph{}).block_count() == 0);
}

TEST_CASE("quotient of the two triangles") {
    auto g = fixtures::two_triangles();
    auto q = build_quotient(g, fixtures::triangle_split());
    CHECK(q.internal == std::vector<Count>{3, 3});
    CHECK(q.cross(0, 1) == 1);
    CHECK(q.cross(1, 0) == 1);
    CHECK(q.cross(0, 0) == 0);
    CHECK(q.degree_sum == std::vector<Count>{7, 7});
    CHECK(is_conserved(q, 7));
    CHECK(*modularity(q, 7) == doctest::Approx(5.0 / 14.0).epsilon(1e-15));
    CHECK(delta_q(q, 7, 0, 1) == doctest::Approx(-5.0 / 14.0).epsilon(1e-15));
}

TEST_CASE("singleton quotient mirrors the graph") {
    auto g = fixtures::two_triangles();
    auto q = build_quotient(g, singleton_partition(g));
    for (NodeId x = 0; x < 6; ++x) {
        CHECK(q.internal[x] == 0);
        CHECK(q.degree_sum[x] == g.degree(x));
        for (NodeId y = 0; y < 6; ++y)
            if (x != y) CHECK(q.cross(x, y) == (g.adjacent(x, y) ? 1 : 0));
    }
    double expected = 0.0;
    for (NodeId x = 0; x < 6; ++x) expected -= std::pow(static_cast<double>(g.degree(x)) / 14.0, 2);
    CHECK(*modularity(q, 7) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("one-block quotient") {
    auto g = fixtures::two_triangles();
    auto q = build_quotient(g, fixtures::one_block(6));
    CHECK(q.internal == std::vector<Count>{7});
    CHECK(q.degree_sum == std::vector<Count>{14});
    CHECK(q.rows == std::vector<Row>{{}});
    CHECK(*modularity(q, 7) == 0.0);
}

TEST_CASE("modularity is undefined without edges") {
    auto g = fixtures::graph(3, {});
    CHECK_FALSE(modularity(build_quotient(g, singleton_partition(g)), 0).has_value());
}

TEST_CASE("delta_q examples") {
    auto edge = fixtures::single_edge();
    auto q = build_quotient(edge, singleton_partition(edge));
    CHECK(delta_q(q, 1, 0, 1) == 0.5);
    CHECK_THROWS_AS(delta_q(q, 1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(delta_q(q, 0, 0, 1), std::invalid_argument);

    auto apart = fixtures::graph(4, {{0, 1}, {2, 3}});
    auto qa = build_quotient(apart, singleton_partition(apart));
    CHECK(delta_q(qa, 2, 0, 2) == doctest::Approx(-2.0 * 1.0 / 16.0));
}

TEST_CASE("build_quotient rejects a mismatched partition") {
    CHECK_THROWS_AS(build_quotient(fixtures::path3(), Partition({0, 0})), std::invalid_argument);
}

TEST_CASE("merge_blocks") {
    auto g = fixtures::two_triangles();
    auto p = singleton_partition(g);
    auto q = build_quotient(g, p);

    SUBCASE("all singletons is the identity") {
        std::vector<std::vector<BlockId>> groups{{0}, {1}, {2}, {3}, {4}, {5}};
        auto merged = merge_blocks(p, q, groups);
        CHECK(merged.partition == p);
        CHECK(merged.quotient == q);
    }
    SUBCASE("groups of four and two") {
        std::vector<std::vector<BlockId>> groups{{4, 5}, {0, 1, 2, 3}};
        auto merged = merge_blocks(p, q, groups);
        CHECK(merged.partition.block_count() == 2);
        CHECK(merged.partition == Partition({0, 0, 0, 0, 1, 1}));
        CHECK(merged.quotient == build_quotient(g, merged.partition));
    }
    SUBCASE("everything into one") {
        std::vector<std::vector<BlockId>> groups{{0, 1, 2, 3, 4, 5}};
        auto merged = merge_blocks(p, q, groups);
        CHECK(merged.quotient.internal == std::vector<Count>{7});
        CHECK(merged.quotient.degree_sum == std::vector<Count>{14});
    }
    SUBCASE("invalid groupings") {
        std::vector<std::vector<BlockId>> overlap{{0, 1, 2}, {2, 3, 4, 5}};
        CHECK_THROWS_AS(merge_blocks(p, q, overlap), std::invalid_argument);
        std::vector<std::vector<BlockId>> missing{{0, 1, 2}, {3, 4}};
        CHECK_THROWS_AS(merge_blocks(p, q, missing), std::invalid_argument);
        std::vector<std::vector<BlockId>> outside{{0, 1, 2}, {3, 4, 5, 6}};
        CHECK_THROWS_AS(merge_blocks(p, q, outside), std::invalid_argument);
    }
}

TEST_CASE("grouping_from_labels numbers groups by smallest member") {
    std::vector<std::size_t> labels{7, 3, 7, 9, 3};
    auto grouping = grouping_from_labels(labels);
    CHECK(grouping.group_count == 3);
    CHECK(grouping.group_of == std::vector<BlockId>{0, 1, 0, 2, 1});
}

TEST_CASE("random merges keep the quotient exact") {
    testkit::Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(40);
        auto g = testkit::random_graph(n, 0.05 + 0.3 * rng.uniform(), rng);
        if (g.edge_count() == 0) continue;
        const auto m = static_cast<Count>(g.edge_count());
        auto p = testkit::random_partition(n, 1 + rng.below(n), rng);
        auto q = build_quotient(g, p);
        REQUIRE(is_conserved(q, m));
        CHECK(*modularity(q, m) == doctest::Approx(node_level_modularity(g, p)).epsilon(1e-12));

        while (p.block_count() > 1) {
            std::vector<std::size_t> labels(p.block_count());
            for (std::size_t b = 0; b < labels.size(); ++b) labels[b] = rng.below(labels.size() / 2 + 1);
            auto grouping = grouping_from_labels(labels);
            if (grouping.group_count == p.block_count())
                grouping = grouping_from_labels(std::vector<std::size_t>(labels.size(), 0));
            auto merged = merge_blocks(p, q, grouping);
            CHECK(is_conserved(merged.quotient, m));
            CHECK(merged.quotient == build_quotient(g, merged.partition));
            p = std::move(merged.partition);
            q = std::move(merged.quotient);
        }
    }
}
