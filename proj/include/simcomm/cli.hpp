#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simcomm/graph.hpp"
#include "simcomm/partition.hpp"
#include "simcomm/trace.hpp"

namespace simcomm::cli {

enum class InputFormat { edgelist, gml };
enum class Algorithm { xcz, cnm, hybrid };

std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm a);

/// `.gml` files are GML, anything else an edge list.
InputFormat format_for(const std::filesystem::path& path);

/// Throws ParseError on malformed content and std::runtime_error when the
/// file cannot be opened.
LoadedGraph load_graph(const std::filesystem::path& path, InputFormat format);

RunResult run_algorithm(const Graph& g, Algorithm algo, unsigned threads);

struct RunReport {
    std::string algorithm;
    std::size_t n = 0;
    std::size_t m = 0;
    double best_q = 0.0;
    std::size_t communities = 0;
    std::size_t best_record = 0;
    std::vector<RoundRecord> trace;
    double load_ms = 0.0;
    PhaseTimes times;
};

RunReport make_report(Algorithm algo, const Graph& g, const RunResult& run, double load_ms);

/// Key-value header, then one fixed-width row per recorded division.
/// With `timings` false the time_* lines are left out and the document is
/// a pure function of the input.
void write_report(std::ostream& out, const RunReport& report, bool timings = true);

/// Label order for output: non-negative integers by value first, then the
/// remaining labels byte-wise.
bool label_less(std::string_view a, std::string_view b);

/// `label<TAB>community` per node in id order. Communities are renumbered
/// 0..C-1 by ascending smallest member label.
void write_assignments(std::ostream& out, const Partition& p, const LabelMap& labels);

/// Entry point for the `simcomm` tool. Exit codes: 0 ok, 1 usage error,
/// 2 unreadable or malformed input, 3 graph without edges.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitNoEdges = 3;

}  // namespace simcomm::cli
