#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fixtures.hpp"
#include "simcomm/similarity.hpp"
#include "simcomm/testkit.hpp"
#include "simcomm/xcz.hpp"

using namespace simcomm;

namespace {

// The six-block similarity matrix of the worked example, upper triangle.
SimilarityTable example_matrix() {
    const double s[6][6] = {{0, 2, 2, 1, 0, 1}, {2, 0, 1, 3, 1, 1}, {2, 1, 0, 1, 0, 1},
                            {1, 3, 1, 0, 2, 0}, {0, 1, 0, 2, 0, 3}, {1, 1, 1, 0, 3, 0}};
    std::vector<SimilarityTable::Entry> entries;
    for (BlockId i = 0; i < 6; ++i)
        for (BlockId j = i + 1; j < 6; ++j)
            if (s[i][j] > 0) entries.push_back({i, j, s[i][j]});
    return SimilarityTable::from_entries(6, std::move(entries));
}

using Arcs = std::vector<std::vector<BlockId>>;
const Arcs kExampleArcs{{1, 2}, {3}, {0}, {1}, {5}, {4}};

// Seven nodes in six blocks, {1, 6} being the only pair, whose quotient
// reproduces the worked example's arcs.
Graph example_graph() {
    return fixtures::graph(7, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {1, 5}, {1, 6}, {3, 4}, {3, 5}, {4, 5},
                               {4, 6}, {5, 6}});
}
Partition example_blocks() { return Partition({0, 1, 2, 3, 4, 5, 1}); }

bool same_trace(const RunTrace& a, const RunTrace& b) {
    if (a.rounds.size() != b.rounds.size() || a.best_index != b.best_index) return false;
    for (std::size_t k = 0; k < a.rounds.size(); ++k) {
        const auto& x = a.rounds[k];
        const auto& y = b.rounds[k];
        if (x.phase != y.phase || x.round != y.round || x.h != y.h || std::memcmp(&x.q, &y.q, sizeof x.q) != 0)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("links and components of the example matrix") {
    auto links = most_similar_links(example_matrix(), 6);
    CHECK(links.arcs == kExampleArcs);
    auto groups = link_components(links, 6);
    CHECK(groups.group_count == 2);
    CHECK(groups.group_of == std::vector<BlockId>{0, 0, 0, 0, 1, 1});
}

TEST_CASE("a graph realizing the example") {
    auto g = example_graph();
    auto p = example_blocks();
    auto q = build_quotient(g, p);
    CHECK(maximal_partners(q, p.sizes(), kTieTolerance) == kExampleArcs);
    CHECK(most_similar_links(similarity_table(q, p.sizes()), 6).arcs == kExampleArcs);
    auto merged = merge_blocks(p, q, link_components({kExampleArcs}, 6));
    CHECK(merged.partition == Partition({0, 0, 0, 0, 1, 1, 0}));
}

TEST_CASE("link edge cases") {
    CHECK(most_similar_links(SimilarityTable(3), 3).arcs == Arcs{{}, {}, {}});
    CHECK(link_components({Arcs{{}, {}, {}}}, 3).group_count == 3);
    CHECK(most_similar_links(SimilarityTable::from_entries(2, {{0, 1, 0.3}}), 2).arcs == Arcs{{1}, {0}});
    CHECK(link_components({Arcs{{}, {0}, {0}, {0}}}, 4).group_count == 1);
}

TEST_CASE("ties within the tolerance are all maximal") {
    auto t = SimilarityTable::from_entries(3, {{0, 1, 1.0 / std::sqrt(2.0)}, {0, 2, 2.0 / std::sqrt(8.0)}});
    CHECK(most_similar_links(t, 3).arcs[0] == std::vector<BlockId>{1, 2});
}

TEST_CASE("xcz on small graphs") {
    SUBCASE("single edge") {
        auto r = xcz_run(fixtures::single_edge());
        CHECK(r.trace.rounds.size() == 2);
        CHECK(r.trace.rounds[0].q == -0.5);
        CHECK(r.trace.best_q() == 0.0);
        CHECK(r.best.block_count() == 1);
    }
    SUBCASE("two triangles") {
        auto r = xcz_run(fixtures::two_triangles());
        CHECK(r.best == fixtures::triangle_split());
        CHECK(r.trace.best_q() == doctest::Approx(5.0 / 14.0).epsilon(1e-15));
    }
    SUBCASE("no edges") {
        CHECK_THROWS_AS(xcz_run(fixtures::graph(4, {})), NoEdgesError);
        CHECK_THROWS_AS(xcz_one_round(fixtures::graph(4, {})), NoEdgesError);
    }
    SUBCASE("disconnected graph stops when nothing merges") {
        auto r = xcz_run(fixtures::graph(7, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}));
        CHECK(r.trace.rounds.back().h == 3);
        CHECK(r.best.block_of(6) != r.best.block_of(0));
    }
}

TEST_CASE("one-round division") {
    CHECK(xcz_one_round(fixtures::single_edge()).block_count() == 1);
    CHECK(xcz_one_round(fixtures::cycle4()) == Partition({0, 1, 0, 1}));
    CHECK(xcz_one_round(fixtures::two_triangles()) == fixtures::triangle_split());
    auto with_isolated = xcz_one_round(fixtures::graph(4, {{0, 1}, {1, 2}}));
    CHECK(with_isolated.block_size(with_isolated.block_of(3)) == 1);

    testkit::Rng rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = testkit::random_graph(2 + rng.below(40), 0.1, rng);
        if (g.edge_count() == 0) continue;
        auto p = xcz_one_round(g);
        for (NodeId x = 0; x < g.node_count(); ++x)
            CHECK((p.block_size(p.block_of(x)) >= 2) == (g.degree(x) > 0));
        CHECK(p == xcz_one_round(g, 3));
    }
}

TEST_CASE("xcz trace properties on random graphs") {
    testkit::Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = testkit::random_graph(2 + rng.below(60), 0.03 + 0.2 * rng.uniform(), rng);
        if (g.edge_count() == 0) continue;
        const auto m = static_cast<Count>(g.edge_count());

        std::vector<Partition> divisions;
        XczOptions options;
        options.on_division = [&](const Partition& p, const QuotientGraph& q) {
            CHECK(is_conserved(q, m));
            CHECK(q == build_quotient(g, p));
            if (!divisions.empty()) {
                // Each division coarsens the one before: same block before implies same block after.
                const Partition& prev = divisions.back();
                std::vector<BlockId> image(prev.block_count(), ~BlockId{0});
                for (NodeId x = 0; x < g.node_count(); ++x) {
                    BlockId& slot = image[prev.block_of(x)];
                    if (slot == ~BlockId{0}) slot = p.block_of(x);
                    CHECK(slot == p.block_of(x));
                }
            }
            divisions.push_back(p);
        };
        auto r = xcz_run(g, options);
        REQUIRE(divisions.size() == r.trace.rounds.size());

        double best = -2.0;
        for (std::size_t k = 0; k < divisions.size(); ++k) {
            const double q = *modularity(build_quotient(g, divisions[k]), m);
            CHECK(q == r.trace.rounds[k].q);
            CHECK(r.trace.rounds[k].h == divisions[k].block_count());
            if (k > 0) CHECK(r.trace.rounds[k].h < r.trace.rounds[k - 1].h);
            best = std::max(best, q);
        }
        CHECK(r.trace.best_q() == best);
        CHECK(r.best == divisions[r.trace.best_index]);

        std::size_t components = 0;
        connected_components(g, &components);
        CHECK(r.trace.rounds.back().h == components);
        if (components == 1) {
            const auto bound = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(g.node_count())))) + 1;
            CHECK(r.trace.rounds.size() - 1 <= bound);
        }
        CHECK(same_trace(r.trace, xcz_run(g, {4, {}}).trace));
    }
}
