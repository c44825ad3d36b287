#include "simcomm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "simcomm/cnm.hpp"
#include "simcomm/testkit.hpp"
#include "simcomm/xcz.hpp"

namespace simcomm::cli {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string format(const char* fmt, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, value);
    return buf;
}

std::optional<std::uint64_t> as_integer(std::string_view s) {
    if (s.empty() || s.size() > 19) return std::nullopt;
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct DetectArgs {
    std::string input;
    std::string format;
    std::string algo = "hybrid";
    std::string out;
    std::string report;
    unsigned threads = default_threads();
    bool no_timings = false;
};

struct BenchArgs {
    testkit::PlantedPartitionSpec spec{100, 100, 0.1, 0.001, 1};
    std::vector<std::string> algos{"xcz", "cnm"};
    unsigned repeat = 3;
    unsigned threads = default_threads();
};

InputFormat resolve_format(const std::string& flag, const std::string& path) {
    if (flag == "gml") return InputFormat::gml;
    if (flag == "edgelist") return InputFormat::edgelist;
    return format_for(path);
}

int cmd_detect(const DetectArgs& args, std::ostream& out, std::ostream& err) {
    const auto algo = parse_algorithm(args.algo);
    if (!algo) {
        err << "unknown algorithm '" << args.algo << "' (expected xcz, cnm or hybrid)\n";
        return kExitUsage;
    }
    LoadedGraph loaded;
    const auto t0 = Clock::now();
    try {
        loaded = load_graph(args.input, resolve_format(args.format, args.input));
    } catch (const std::exception& e) {
        err << "error: " << args.input << ": " << e.what() << '\n';
        return kExitBadInput;
    }
    const double load_ms = elapsed_ms(t0);
    if (loaded.dropped() > 0)
        err << "warning: dropped " << loaded.dropped() << " edge records (" << loaded.dropped_self_loops
            << " self-loops, " << loaded.dropped_duplicates << " duplicates)\n";
    if (loaded.graph.edge_count() == 0) {
        err << "error: " << args.input << ": graph has no edges\n";
        return kExitNoEdges;
    }

    const RunResult result = run_algorithm(loaded.graph, *algo, args.threads);
    const RunReport report = make_report(*algo, loaded.graph, result, load_ms);

    std::ostream& summary = args.out.empty() ? err : out;
    if (args.out.empty()) {
        write_assignments(out, result.best, loaded.labels);
    } else {
        std::ofstream file(args.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << args.out << '\n';
            return kExitBadInput;
        }
        write_assignments(file, result.best, loaded.labels);
    }
    if (!args.report.empty()) {
        std::ofstream file(args.report, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << args.report << '\n';
            return kExitBadInput;
        }
        write_report(file, report, !args.no_timings);
    }
    summary << report.algorithm << ": n=" << report.n << " m=" << report.m << " communities=" << report.communities
            << " Q=" << format("%.6f", report.best_q) << " time_ms=" << format("%.3f", report.times.total_ms) << '\n';
    return kExitOk;
}

int cmd_validate(const std::string& input, const std::string& fmt, std::ostream& out, std::ostream& err) {
    LoadedGraph loaded;
    try {
        loaded = load_graph(input, resolve_format(fmt, input));
    } catch (const std::exception& e) {
        err << "error: " << input << ": " << e.what() << '\n';
        return kExitBadInput;
    }
    const ValidationReport report = validate(loaded.graph);
    out << "n=" << loaded.graph.node_count() << " m=" << loaded.graph.edge_count()
        << " components=" << report.components << '\n';
    out << "dropped=" << loaded.dropped() << " self_loops=" << loaded.dropped_self_loops
        << " duplicates=" << loaded.dropped_duplicates << '\n';
    if (report.valid()) {
        out << "valid\n";
    } else {
        for (const auto& v : report.violations) out << "violation: " << v << '\n';
    }
    return kExitOk;
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
    std::vector<Algorithm> algos;
    for (const auto& name : args.algos) {
        auto a = parse_algorithm(name);
        if (!a) {
            err << "unknown algorithm '" << name << "'\n";
            return kExitUsage;
        }
        algos.push_back(*a);
    }
    testkit::PlantedGraph planted;
    try {
        planted = testkit::planted_partition(args.spec);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    const Graph& g = planted.graph;
    out << "graph: planted blocks=" << args.spec.blocks << " block_size=" << args.spec.block_size
        << " p_in=" << args.spec.p_in << " p_out=" << args.spec.p_out << " seed=" << args.spec.seed << '\n';
    out << "n=" << g.node_count() << " m=" << g.edge_count() << " repeat=" << args.repeat << '\n';
    if (g.edge_count() == 0) {
        err << "error: generated graph has no edges\n";
        return kExitNoEdges;
    }
    char line[128];
    std::snprintf(line, sizeof line, "%-8s %14s %12s %12s\n", "algo", "median_ms", "best_q", "communities");
    out << line;
    for (Algorithm a : algos) {
        std::vector<double> times;
        RunResult last;
        for (unsigned r = 0; r < std::max(1u, args.repeat); ++r) {
            const auto t0 = Clock::now();
            last = run_algorithm(g, a, args.threads);
            times.push_back(elapsed_ms(t0));
        }
        std::sort(times.begin(), times.end());
        const double median = times.size() % 2 ? times[times.size() / 2]
                                                : 0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);
        std::snprintf(line, sizeof line, "%-8s %14.3f %12.6f %12zu\n", std::string(algorithm_name(a)).c_str(), median,
                      last.trace.best_q(), last.best.block_count());
        out << line;
    }
    return kExitOk;
}

}  // namespace

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    if (name == "xcz") return Algorithm::xcz;
    if (name == "cnm") return Algorithm::cnm;
    if (name == "hybrid" || name == "xcz+cnm") return Algorithm::hybrid;
    return std::nullopt;
}

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::xcz: return "xcz";
        case Algorithm::cnm: return "cnm";
        case Algorithm::hybrid: return "hybrid";
    }
    return "?";
}

InputFormat format_for(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".gml" ? InputFormat::gml : InputFormat::edgelist;
}

LoadedGraph load_graph(const std::filesystem::path& path, InputFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file");
    return format == InputFormat::gml ? load_gml(in) : load_edge_list(in);
}

RunResult run_algorithm(const Graph& g, Algorithm algo, unsigned threads) {
    switch (algo) {
        case Algorithm::xcz: return xcz_run(g, {threads, {}});
        case Algorithm::cnm: return cnm_run(g, singleton_partition(g));
        case Algorithm::hybrid: return hybrid_run(g, threads);
    }
    throw std::logic_error("unhandled algorithm");
}

RunReport make_report(Algorithm algo, const Graph& g, const RunResult& run, double load_ms) {
    RunReport r;
    r.algorithm = algorithm_name(algo);
    r.n = g.node_count();
    r.m = g.edge_count();
    r.best_q = run.trace.best_q();
    r.communities = run.best.block_count();
    r.best_record = run.trace.best_index;
    r.trace = run.trace.rounds;
    r.load_ms = load_ms;
    r.times = run.trace.times;
    return r;
}

void write_report(std::ostream& out, const RunReport& r, bool timings) {
    out << "algorithm: " << r.algorithm << '\n';
    out << "n: " << r.n << '\n';
    out << "m: " << r.m << '\n';
    out << "best_q: " << format("%.9f", r.best_q) << '\n';
    out << "communities: " << r.communities << '\n';
    out << "best_record: " << r.best_record << '\n';
    out << "records: " << r.trace.size() << '\n';
    if (timings) {
        out << "time_load_ms: " << format("%.3f", r.load_ms) << '\n';
        out << "time_similarity_ms: " << format("%.3f", r.times.similarity_ms) << '\n';
        out << "time_merge_ms: " << format("%.3f", r.times.merge_ms) << '\n';
        out << "time_total_ms: " << format("%.3f", r.times.total_ms) << '\n';
    }
    out << "trace:\n";
    char line[128];
    std::snprintf(line, sizeof line, "%8s %-5s %8s %10s %14s\n", "record", "phase", "round", "h", "Q");
    out << line;
    for (std::size_t k = 0; k < r.trace.size(); ++k) {
        const RoundRecord& rec = r.trace[k];
        std::snprintf(line, sizeof line, "%8zu %-5s %8zu %10zu %14.9f\n", k, std::string(phase_name(rec.phase)).c_str(),
                      rec.round, rec.h, rec.q);
        out << line;
    }
}

bool label_less(std::string_view a, std::string_view b) {
    const auto ia = as_integer(a);
    const auto ib = as_integer(b);
    if (ia && ib) return *ia != *ib ? *ia < *ib : a < b;
    if (ia || ib) return ia.has_value();
    return a < b;
}

void write_assignments(std::ostream& out, const Partition& p, const LabelMap& labels) {
    const std::size_t h = p.block_count();
    std::vector<NodeId> smallest(h, ~NodeId{0});
    for (NodeId x = 0; x < p.node_count(); ++x) {
        NodeId& s = smallest[p.block_of(x)];
        if (s == ~NodeId{0} || label_less(labels.label(x), labels.label(s))) s = x;
    }
    std::vector<BlockId> order(h);
    for (BlockId b = 0; b < h; ++b) order[b] = b;
    std::sort(order.begin(), order.end(),
              [&](BlockId a, BlockId b) { return label_less(labels.label(smallest[a]), labels.label(smallest[b])); });
    std::vector<BlockId> rank(h);
    for (BlockId k = 0; k < h; ++k) rank[order[k]] = k;
    for (NodeId x = 0; x < p.node_count(); ++x) out << labels.label(x) << '\t' << rank[p.block_of(x)] << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Community detection by subgraph similarity (xcz), greedy modularity (cnm) and their hybrid"};
    app.name("simcomm");
    app.require_subcommand(1);

    DetectArgs detect;
    auto* detect_cmd = app.add_subcommand("detect", "Find communities and write assignments and a run report");
    detect_cmd->add_option("input", detect.input, "Graph file")->required();
    detect_cmd->add_option("--format", detect.format, "edgelist or gml (default: by extension)")
        ->check(CLI::IsMember({"edgelist", "gml"}));
    detect_cmd->add_option("--algo", detect.algo, "xcz, cnm or hybrid")->capture_default_str();
    detect_cmd->add_option("--out", detect.out, "Assignment TSV (default: stdout)");
    detect_cmd->add_option("--report", detect.report, "Run report path");
    detect_cmd->add_option("--threads", detect.threads, "Similarity workers")->capture_default_str()
        ->check(CLI::PositiveNumber);
    detect_cmd->add_flag("--no-timings", detect.no_timings, "Leave time_* lines out of the report");

    std::string validate_input;
    std::string validate_format;
    auto* validate_cmd = app.add_subcommand("validate", "Load a graph and check it");
    validate_cmd->add_option("input", validate_input, "Graph file")->required();
    validate_cmd->add_option("--format", validate_format, "edgelist or gml (default: by extension)")
        ->check(CLI::IsMember({"edgelist", "gml"}));

    BenchArgs bench;
    std::string algos_csv = "xcz,cnm";
    auto* bench_cmd = app.add_subcommand("bench", "Time the algorithms on a planted-partition graph");
    bench_cmd->add_option("--blocks", bench.spec.blocks, "Planted blocks")->capture_default_str();
    bench_cmd->add_option("--block-size", bench.spec.block_size, "Nodes per block")->capture_default_str();
    bench_cmd->add_option("--p-in", bench.spec.p_in, "Intra-block edge probability")->capture_default_str();
    bench_cmd->add_option("--p-out", bench.spec.p_out, "Inter-block edge probability")->capture_default_str();
    bench_cmd->add_option("--seed", bench.spec.seed, "Generator seed")->capture_default_str();
    bench_cmd->add_option("--algos", algos_csv, "Comma-separated algorithms")->capture_default_str();
    bench_cmd->add_option("--repeat", bench.repeat, "Runs per algorithm")->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--threads", bench.threads, "Similarity workers")->capture_default_str()
        ->check(CLI::PositiveNumber);

    std::vector<const char*> argv{"simcomm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*detect_cmd) return cmd_detect(detect, out, err);
    if (*validate_cmd) return cmd_validate(validate_input, validate_format, out, err);
    bench.algos.clear();
    std::stringstream list(algos_csv);
    for (std::string name; std::getline(list, name, ',');)
        if (!name.empty()) bench.algos.push_back(name);
    return cmd_bench(bench, out, err);
}

}  // namespace simcomm::cli
