#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "simcomm/cnm.hpp"
#include "simcomm/testkit.hpp"
#include "simcomm/xcz.hpp"

using namespace simcomm;

TEST_CASE("rng stream is the standard mt19937_64") {
    testkit::Rng rng(5489);
    for (int k = 0; k < 9999; ++k) rng.next();
    CHECK(rng.next() == 9981545732273789042ULL);
    testkit::Rng a(3), b(3);
    for (int k = 0; k < 100; ++k) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK((u >= 0.0 && u < 1.0));
    }
}

TEST_CASE("brute force examples") {
    auto tt = testkit::brute_force_best_partition(fixtures::two_triangles());
    CHECK(tt.partition == fixtures::triangle_split());
    CHECK(tt.q == doctest::Approx(5.0 / 14.0).epsilon(1e-15));

    auto edge = testkit::brute_force_best_partition(fixtures::single_edge());
    CHECK(edge.partition.block_count() == 1);
    CHECK(edge.q == 0.0);

    auto tri = testkit::brute_force_best_partition(fixtures::triangle());
    CHECK(tri.partition.block_count() == 1);
    CHECK(tri.q == 0.0);

    CHECK_THROWS_AS(testkit::brute_force_best_partition(fixtures::graph(3, {})), std::invalid_argument);
    CHECK_THROWS_AS(testkit::brute_force_best_partition(fixtures::graph(13, {{0, 1}})), std::invalid_argument);
}

TEST_CASE("brute force bounds the heuristics") {
    testkit::Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = testkit::random_graph(2 + rng.below(9), 0.4, rng);
        if (g.edge_count() == 0) continue;
        const double best = testkit::brute_force_best_partition(g).q;
        CHECK(xcz_run(g).trace.best_q() <= best + 1e-12);
        CHECK(cnm_run(g, singleton_partition(g)).trace.best_q() <= best + 1e-12);
        CHECK(hybrid_run(g).trace.best_q() <= best + 1e-12);
    }
}

TEST_CASE("planted partition degenerate cases") {
    auto cliques = testkit::planted_partition({2, 4, 1.0, 0.0, 1});
    CHECK(cliques.graph.node_count() == 8);
    CHECK(cliques.graph.edge_count() == 12);
    std::size_t components = 0;
    connected_components(cliques.graph, &components);
    CHECK(components == 2);
    CHECK(cliques.labels == std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1});

    auto er = testkit::planted_partition({1, 400, 0.05, 0.0, 9});
    const double expected = 0.05 * 400 * 399 / 2;
    CHECK(std::abs(static_cast<double>(er.graph.edge_count()) - expected) < 4 * std::sqrt(expected));

    CHECK_THROWS_AS(testkit::planted_partition({2, 4, 0.1, 0.2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(testkit::planted_partition({0, 4, 0.5, 0.0, 1}), std::invalid_argument);
}

TEST_CASE("planted partition is deterministic and near its expected density") {
    const testkit::PlantedPartitionSpec spec{20, 50, 0.2, 0.004, 77};
    auto a = testkit::planted_partition(spec);
    CHECK(a.graph == testkit::planted_partition(spec).graph);
    CHECK_FALSE(a.graph == testkit::planted_partition({20, 50, 0.2, 0.004, 78}).graph);

    std::size_t inside = 0;
    for (auto [x, y] : a.graph.edges()) inside += a.labels[x] == a.labels[y];
    const double exp_in = 20 * 0.2 * 50 * 49 / 2;
    const double exp_out = 0.004 * 50 * 50 * 190;
    CHECK(std::abs(static_cast<double>(inside) - exp_in) < 4 * std::sqrt(exp_in));
    CHECK(std::abs(static_cast<double>(a.graph.edge_count() - inside) - exp_out) < 4 * std::sqrt(exp_out));
}

TEST_CASE("all algorithms recover the planted blocks") {
    auto planted = testkit::planted_partition({4, 25, 0.5, 0.02, 2024});
    const Graph& g = planted.graph;
    CHECK(fixtures::recovered_blocks(xcz_run(g).best, planted.labels, 4) >= 3);
    CHECK(fixtures::recovered_blocks(cnm_run(g, singleton_partition(g)).best, planted.labels, 4) >= 3);
    CHECK(fixtures::recovered_blocks(hybrid_run(g).best, planted.labels, 4) >= 3);
}

TEST_CASE("random partitions are dense and canonical") {
    testkit::Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = testkit::random_partition(1 + rng.below(30), 1 + rng.below(10), rng);
        CHECK(p == p.canonical());
    }
}

TEST_CASE("naive similarity refuses large quotients") {
    QuotientGraph q;
    q.rows.resize(201);
    q.internal.resize(201);
    q.degree_sum.resize(201);
    std::vector<std::size_t> sizes(201, 1);
    CHECK_THROWS_AS(testkit::naive_similarity(q, sizes), std::invalid_argument);
}
