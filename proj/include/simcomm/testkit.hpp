#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "simcomm/graph.hpp"
#include "simcomm/partition.hpp"
#include "simcomm/similarity.hpp"

// Reference oracles and graph generators. The oracles recompute everything
// from their own formulas and never call the library routines they check.

namespace simcomm::testkit {

/// Deterministic stream: std::mt19937_64 (its output sequence is fixed by
/// the C++ standard) with doubles taken from the top 53 bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform in [0, bound); bound > 0. Plain modulo, bias is irrelevant here.
    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

private:
    std::mt19937_64 engine_;
};

struct PlantedPartitionSpec {
    std::size_t blocks = 1;
    std::size_t block_size = 1;
    double p_in = 1.0;
    double p_out = 0.0;
    std::uint64_t seed = 1;

    std::size_t node_count() const { return blocks * block_size; }
};

struct PlantedGraph {
    Graph graph;
    /// Planted block of every node; node x sits in block x / block_size.
    std::vector<std::size_t> labels;
};

/// Throws std::invalid_argument unless 0 <= p_out < p_in <= 1 and the sizes are positive.
void check_spec(const PlantedPartitionSpec& spec);

/// Each intra-block pair is an edge with probability p_in, each inter-block
/// pair with p_out. Pairs are enumerated per block pair in ascending order and
/// sampled by geometric skipping, so the cost is proportional to the edges made.
PlantedGraph planted_partition(const PlantedPartitionSpec& spec);

/// G(n, p) by independent coin flips over all pairs in ascending order.
Graph random_graph(std::size_t n, double p, Rng& rng);

/// Uniformly random block per node among up to `max_blocks`, renumbered densely.
Partition random_partition(std::size_t n, std::size_t max_blocks, Rng& rng);

struct BestPartition {
    Partition partition;
    double q;
};

inline constexpr std::size_t kBruteForceMaxNodes = 12;

/// Exhaustive search over all set partitions (restricted-growth strings).
/// The first maximum in enumeration order wins. Throws std::invalid_argument
/// for n > 12 or m = 0.
BestPartition brute_force_best_partition(const Graph& g);

inline constexpr std::size_t kNaiveSimilarityMaxBlocks = 200;

/// Dense O(h³) transcription of the subgraph similarity over all pairs.
SimilarityTable naive_similarity(const QuotientGraph& q, std::span<const std::size_t> sizes);

}  // namespace simcomm::testkit
