#include "simcomm/graph.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

namespace simcomm {
namespace {

LoadedGraph finish(LabelMap labels, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    LoadedGraph out;
    DropCounts drops;
    out.graph = Graph::from_edges(labels.size(), edges, &drops);
    out.labels = std::move(labels);
    out.dropped_self_loops = drops.self_loops;
    out.dropped_duplicates = drops.duplicates;
    return out;
}

// GML tokenizer and tree. Values are integers, reals, strings or nested lists.
struct GmlList;
using GmlValue = std::variant<std::int64_t, double, std::string, GmlList>;

struct GmlEntry {
    std::string key;
    std::size_t line;
    std::unique_ptr<GmlValue> value;
};

struct GmlList {
    std::vector<GmlEntry> entries;
};

class GmlReader {
public:
    explicit GmlReader(std::istream& in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        text_ = buf.str();
    }

    GmlList parse_document() {
        GmlList root = parse_list(false);
        return root;
    }

private:
    GmlList parse_list(bool nested) {
        const std::size_t open_line = line_;
        GmlList list;
        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) {
                if (nested) throw ParseError("unbalanced '[' (list never closed)", open_line);
                return list;
            }
            if (text_[pos_] == ']') {
                if (!nested) throw ParseError("unbalanced ']'", line_);
                ++pos_;
                return list;
            }
            std::string key = read_key();
            const std::size_t key_line = line_;
            skip_space();
            if (pos_ >= text_.size()) throw ParseError("key '" + key + "' has no value", key_line);
            list.entries.push_back({std::move(key), key_line, std::make_unique<GmlValue>(read_value())});
        }
    }

    GmlValue read_value() {
        char c = text_[pos_];
        if (c == '[') {
            ++pos_;
            return parse_list(true);
        }
        if (c == '"') {
            const std::size_t start_line = line_;
            std::string s;
            ++pos_;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\n') ++line_;
                s += text_[pos_++];
            }
            if (pos_ >= text_.size()) throw ParseError("unterminated string", start_line);
            ++pos_;
            return s;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '[' && text_[pos_] != ']')
            ++pos_;
        std::string_view word(text_.data() + start, pos_ - start);
        if (word.empty()) throw ParseError("expected a value", line_);
        std::int64_t integer = 0;
        auto [p, ec] = std::from_chars(word.data(), word.data() + word.size(), integer);
        if (ec == std::errc() && p == word.data() + word.size()) return integer;
        double real = 0;
        auto [q, ec2] = std::from_chars(word.data(), word.data() + word.size(), real);
        if (ec2 == std::errc() && q == word.data() + word.size()) return real;
        throw ParseError("malformed value '" + std::string(word) + "'", line_);
    }

    std::string read_key() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", line_);
        return text_.substr(start, pos_ - start);
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                return;
            }
        }
    }

    std::string text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

const GmlValue* find_key(const GmlList& list, std::string_view key) {
    for (const auto& e : list.entries)
        if (e.key == key) return e.value.get();
    return nullptr;
}

std::int64_t require_int(const GmlList& list, std::string_view key, std::size_t line) {
    const GmlValue* v = find_key(list, key);
    if (!v) throw ParseError("missing '" + std::string(key) + "'", line);
    if (auto* i = std::get_if<std::int64_t>(v)) return *i;
    throw ParseError("'" + std::string(key) + "' must be an integer", line);
}

}  // namespace

LoadedGraph load_edge_list(std::istream& in) {
    LabelMap labels;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a)) continue;
        if (a.front() == '#') continue;
        if (!(fields >> b) || (fields >> extra))
            throw ParseError("expected two labels per edge line", line_no);
        NodeId x = labels.intern(a);
        NodeId y = labels.intern(b);
        edges.emplace_back(x, y);
    }
    return finish(std::move(labels), edges);
}

LoadedGraph load_gml(std::istream& in) {
    GmlReader reader(in);
    GmlList doc = reader.parse_document();

    const GmlList* graph = nullptr;
    for (const auto& e : doc.entries) {
        if (e.key != "graph") continue;
        graph = std::get_if<GmlList>(e.value.get());
        if (!graph) throw ParseError("'graph' must be a list", e.line);
        break;
    }
    if (!graph) throw ParseError("no 'graph [ ... ]' block", 1);

    LabelMap labels;
    std::map<std::int64_t, NodeId> by_gml_id;
    std::vector<std::pair<NodeId, NodeId>> edges;

    for (const auto& e : graph->entries) {
        if (e.key != "node") continue;
        const auto* node = std::get_if<GmlList>(e.value.get());
        if (!node) throw ParseError("'node' must be a list", e.line);
        std::int64_t id = require_int(*node, "id", e.line);
        std::string label = std::to_string(id);
        if (const GmlValue* v = find_key(*node, "label")) {
            if (auto* s = std::get_if<std::string>(v)) label = *s;
        }
        if (by_gml_id.contains(id)) throw ParseError("duplicate node id " + std::to_string(id), e.line);
        if (labels.contains(label)) throw ParseError("duplicate node label '" + label + "'", e.line);
        by_gml_id.emplace(id, labels.intern(label));
    }
    for (const auto& e : graph->entries) {
        if (e.key != "edge") continue;
        const auto* edge = std::get_if<GmlList>(e.value.get());
        if (!edge) throw ParseError("'edge' must be a list", e.line);
        auto endpoint = [&](std::string_view key) {
            std::int64_t id = require_int(*edge, key, e.line);
            auto it = by_gml_id.find(id);
            if (it == by_gml_id.end())
                throw ParseError("edge references unknown node id " + std::to_string(id), e.line);
            return it->second;
        };
        NodeId s = endpoint("source");
        NodeId t = endpoint("target");
        edges.emplace_back(s, t);
    }
    return finish(std::move(labels), edges);
}

void write_edge_list(std::ostream& out, const Graph& g, const LabelMap& labels) {
    for (auto [x, y] : g.edges()) out << labels.label(x) << ' ' << labels.label(y) << '\n';
}

}  // namespace simcomm
