#include "simcomm/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace simcomm {
namespace {

// Per-worker accumulator over the partners j > i of the current row.
struct Scratch {
    explicit Scratch(std::size_t h) : acc(h, 0.0), direct(h, 0.0), seen(h, 0) {}
    std::vector<double> acc;
    std::vector<double> direct;
    std::vector<char> seen;
    std::vector<BlockId> touched;

    void touch(BlockId j) {
        if (!seen[j]) {
            seen[j] = 1;
            touched.push_back(j);
        }
    }
    void clear(BlockId j) {
        acc[j] = 0.0;
        direct[j] = 0.0;
        seen[j] = 0;
    }
};

constexpr std::size_t kRowsPerChunk = 512;

// Hands out chunks of rows to `threads` workers. Each worker builds its own
// state with make_state() and calls row(i, state) for every row it takes.
template <typename MakeState, typename Row>
auto run_rows(std::size_t h, unsigned threads, MakeState make_state, Row row) {
    using State = decltype(make_state());
    const std::size_t chunks = (h + kRowsPerChunk - 1) / kRowsPerChunk;
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
    std::vector<State> states;
    states.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) states.push_back(make_state());
    std::atomic<std::size_t> next{0};
    auto work = [&](State& state) {
        for (std::size_t c = next++; c < chunks; c = next++) {
            const std::size_t end = std::min(h, (c + 1) * kRowsPerChunk);
            for (std::size_t i = c * kRowsPerChunk; i < end; ++i) row(static_cast<BlockId>(i), c, state);
        }
    };
    if (workers == 1) {
        work(states.front());
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (auto& state : states) pool.emplace_back([&work, &state] { work(state); });
    }
    return states;
}

double normalize(double numerator, Count d_i, Count d_j) {
    return numerator / std::sqrt(static_cast<double>(d_i * d_j));
}

// Quotient rows flattened. For the arc x -> y, `inner` is √e_xy/√|V_x| and
// `outer` is √e_xy/√|V_y|, so the wedge i-k-j contributes outer(i,k)·inner(k,j),
// a product whose value does not depend on which end the wedge is read from.
struct RootRows {
    RootRows(const QuotientGraph& q, std::span<const std::size_t> sizes) {
        std::vector<double> root_size(sizes.size());
        for (std::size_t b = 0; b < sizes.size(); ++b) root_size[b] = std::sqrt(static_cast<double>(sizes[b]));
        offsets.reserve(q.block_count() + 1);
        offsets.push_back(0);
        for (std::size_t x = 0; x < q.block_count(); ++x) {
            for (auto [y, e] : q.rows[x]) {
                const double root = std::sqrt(static_cast<double>(e));
                partners.push_back(y);
                inner.push_back(root / root_size[x]);
                outer.push_back(root / root_size[y]);
            }
            offsets.push_back(partners.size());
        }
    }
    std::span<const BlockId> row(BlockId x) const {
        return {partners.data() + offsets[x], partners.data() + offsets[x + 1]};
    }
    std::vector<std::size_t> offsets;
    std::vector<BlockId> partners;
    std::vector<double> inner;
    std::vector<double> outer;
};

double wedge_term(Count e_ik, Count e_kj, std::size_t size_k) {
    const double root_size = std::sqrt(static_cast<double>(size_k));
    return (std::sqrt(static_cast<double>(e_ik)) / root_size) * (std::sqrt(static_cast<double>(e_kj)) / root_size);
}

// Direct counts of row i go to s.direct and wedge sums to s.acc. With
// `upper` only partners j > i are gathered, otherwise every j != i.
void gather_quotient_row(const QuotientGraph& q, const RootRows& flat, BlockId i, bool upper, Scratch& s) {
    const auto row_i = flat.row(i);
    const std::size_t base_i = flat.offsets[i];
    for (std::size_t a = 0; a < row_i.size(); ++a) {
        if (upper && row_i[a] <= i) continue;
        s.touch(row_i[a]);
        s.direct[row_i[a]] = static_cast<double>(q.rows[i][a].second);
    }
    // Ascending k, the same summation order as subgraph_similarity.
    for (std::size_t a = 0; a < row_i.size(); ++a) {
        const BlockId k = row_i[a];
        const double w = flat.outer[base_i + a];
        const auto row_k = flat.row(k);
        auto it = upper ? std::upper_bound(row_k.begin(), row_k.end(), i) : row_k.begin();
        const double* inner = flat.inner.data() + flat.offsets[k] + (it - row_k.begin());
        for (; it != row_k.end(); ++it, ++inner) {
            if (*it == i) continue;
            s.touch(*it);
            s.acc[*it] += w * *inner;
        }
    }
}

// a_xy + n_xy, counted into s.acc, for y > x or (without `upper`) every y != x.
// A zero count marks an untouched node, so s.seen and s.direct stay unused.
void gather_node_row(const Graph& g, NodeId x, bool upper, Scratch& s) {
    auto bump = [&s](NodeId y) {
        if (s.acc[y] == 0.0) s.touched.push_back(y);
        s.acc[y] += 1.0;
    };
    auto own = g.neighbors(x);
    for (auto it = upper ? std::upper_bound(own.begin(), own.end(), x) : own.begin(); it != own.end(); ++it) bump(*it);
    for (NodeId u : own) {
        auto row = g.neighbors(u);
        for (auto it = upper ? std::upper_bound(row.begin(), row.end(), x) : row.begin(); it != row.end(); ++it)
            if (*it != x) bump(*it);
    }
}

// fill_row(i, scratch, partners, values) appends row i's entries in ascending j.
template <typename FillRow>
SimilarityTable build_rows(std::size_t h, unsigned threads, FillRow fill_row) {
    struct Chunk {
        std::vector<std::size_t> lengths;
        std::vector<BlockId> partners;
        std::vector<double> values;
    };
    struct State {
        Scratch scratch;
        std::vector<std::pair<std::size_t, Chunk>> chunks;
    };
    auto states = run_rows(h, threads, [h] { return State{Scratch(h), {}}; },
                           [&](BlockId i, std::size_t c, State& st) {
                               if (st.chunks.empty() || st.chunks.back().first != c) st.chunks.push_back({c, {}});
                               Chunk& out = st.chunks.back().second;
                               const std::size_t before = out.values.size();
                               fill_row(i, st.scratch, out.partners, out.values);
                               out.lengths.push_back(out.values.size() - before);
                           });
    std::vector<const Chunk*> ordered((h + kRowsPerChunk - 1) / kRowsPerChunk, nullptr);
    for (const State& st : states)
        for (const auto& [c, chunk] : st.chunks) ordered[c] = &chunk;

    SimilarityTable table(h);
    for (const Chunk* chunk : ordered) {
        std::size_t offset = 0;
        for (std::size_t len : chunk->lengths) {
            table.append_row(std::span(chunk->partners).subspan(offset, len),
                             std::span(chunk->values).subspan(offset, len));
            offset += len;
        }
    }
    return table;
}

// Screening slack, far wider than the rounding gap between screen values and normalize.
constexpr double kScreenSlack = 1e-9;

struct Candidate {
    BlockId partner;
    double numerator;
    double screen;
};

struct SelectState {
    explicit SelectState(std::size_t h) : scratch(h) {}
    Scratch scratch;
    std::vector<Candidate> shortlist;
    std::vector<std::pair<BlockId, double>> exact;
};

std::vector<double> inverse_roots(std::span<const Count> degree) {
    std::vector<double> out(degree.size());
    for (std::size_t j = 0; j < degree.size(); ++j)
        out[j] = degree[j] > 0 ? 1.0 / std::sqrt(static_cast<double>(degree[j])) : 0.0;
    return out;
}

// One pass over the touched partners, clearing them. screen = numerator/√d_j
// orders partners like s_ij up to rounding. Keeps every partner whose screen
// plus `allowance` reaches the running best times `keep`; returns the best.
template <bool counts_only = false, typename Numerator>
double screen_touched(Scratch& s, std::span<const double> inv_root, double keep, double allowance,
                      Numerator numerator, std::vector<Candidate>& shortlist) {
    double best = 0.0;
    for (BlockId j : s.touched) {
        const double num = numerator(j);
        const double screen = num * inv_root[j];
        if (screen + allowance > 0.0 && screen + allowance >= best * keep) {
            shortlist.push_back({j, num, screen});
            best = std::max(best, screen);
        }
        if constexpr (counts_only) {
            s.acc[j] = 0.0;
        } else {
            s.clear(j);
        }
    }
    s.touched.clear();
    return best;
}

// evaluate(i, state) fills state.exact with (j, s_ij) for a set of partners
// that contains every maximal one; the maxima are then picked per row.
template <typename Evaluate>
std::vector<std::vector<BlockId>> select_maximal(std::size_t h, double tolerance, unsigned threads,
                                                 Evaluate evaluate) {
    std::vector<std::vector<BlockId>> out(h);
    run_rows(h, threads, [h] { return SelectState(h); }, [&](BlockId i, std::size_t, SelectState& st) {
        evaluate(i, st);
        double best = 0.0;
        for (auto [j, value] : st.exact) best = std::max(best, value);
        for (auto [j, value] : st.exact)
            if (best > 0.0 && value >= best * (1.0 - tolerance)) out[i].push_back(j);
        std::sort(out[i].begin(), out[i].end());
        st.shortlist.clear();
        st.exact.clear();
    });
    return out;
}

// Rows longer than this are not scanned as wedge middles when a bound shows
// they cannot change the outcome.
constexpr std::size_t kHeavyRow = 64;

// e_ij + Σ_k outer(i,k)·outer(j,k) over common k ascending. outer(j,k) equals
// inner(k,j), so this matches the gathered numerator bit for bit.
double merged_numerator(const QuotientGraph& q, const RootRows& flat, BlockId i, BlockId j) {
    const auto row_i = flat.row(i);
    const auto row_j = flat.row(j);
    const double* outer_i = flat.outer.data() + flat.offsets[i];
    const double* outer_j = flat.outer.data() + flat.offsets[j];
    double shared = 0.0;
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < row_i.size() && b < row_j.size()) {
        if (row_i[a] < row_j[b]) {
            ++a;
        } else if (row_j[b] < row_i[a]) {
            ++b;
        } else {
            shared += outer_i[a] * outer_j[b];
            ++a;
            ++b;
        }
    }
    return static_cast<double>(q.cross(i, j)) + shared;
}

}  // namespace

double SimilarityTable::at(BlockId i, BlockId j) const {
    if (i > j) std::swap(i, j);
    if (i == j || j >= block_count()) return 0.0;
    auto row = partners(i);
    auto it = std::lower_bound(row.begin(), row.end(), j);
    if (it == row.end() || *it != j) return 0.0;
    return values(i)[static_cast<std::size_t>(it - row.begin())];
}

std::vector<SimilarityTable::Entry> SimilarityTable::entries() const {
    std::vector<Entry> out;
    out.reserve(size());
    for (BlockId i = 0; i < block_count(); ++i) {
        auto p = partners(i);
        auto v = values(i);
        for (std::size_t k = 0; k < p.size(); ++k) out.push_back({i, p[k], v[k]});
    }
    return out;
}

SimilarityTable SimilarityTable::from_entries(std::size_t h, std::vector<Entry> entries) {
    for (auto& e : entries) {
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i == e.j || e.j >= h) throw std::invalid_argument("similarity entry out of range");
        if (!(e.value > 0.0) || !std::isfinite(e.value))
            throw std::invalid_argument("similarity entries must be positive and finite");
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
    for (std::size_t k = 1; k < entries.size(); ++k)
        if (entries[k].i == entries[k - 1].i && entries[k].j == entries[k - 1].j)
            throw std::invalid_argument("duplicate similarity entry");

    SimilarityTable table(h);
    std::vector<BlockId> partners;
    std::vector<double> values;
    std::size_t k = 0;
    for (BlockId i = 0; i < h; ++i) {
        partners.clear();
        values.clear();
        for (; k < entries.size() && entries[k].i == i; ++k) {
            partners.push_back(entries[k].j);
            values.push_back(entries[k].value);
        }
        table.append_row(partners, values);
    }
    return table;
}

void SimilarityTable::append_row(std::span<const BlockId> partners, std::span<const double> values) {
    if (offsets_.size() > block_count_) throw std::logic_error("similarity table already full");
    partners_.insert(partners_.end(), partners.begin(), partners.end());
    values_.insert(values_.end(), values.begin(), values.end());
    offsets_.push_back(values_.size());
}

double subgraph_similarity(const QuotientGraph& q, std::span<const std::size_t> sizes, BlockId i, BlockId j) {
    if (i == j) throw std::invalid_argument("subgraph_similarity needs two distinct blocks");
    if (i > j) std::swap(i, j);
    const Count d_i = q.degree_sum[i];
    const Count d_j = q.degree_sum[j];
    if (d_i == 0 || d_j == 0) return 0.0;

    const auto& row_i = q.rows[i];
    const auto& row_j = q.rows[j];
    double shared = 0.0;
    auto a = row_i.begin();
    auto b = row_j.begin();
    while (a != row_i.end() && b != row_j.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            shared += wedge_term(a->second, b->second, sizes[a->first]);
            ++a;
            ++b;
        }
    }
    return normalize(static_cast<double>(q.cross(i, j)) + shared, d_i, d_j);
}

double node_similarity(const Graph& g, NodeId x, NodeId y) {
    if (x == y) throw std::invalid_argument("node_similarity needs two distinct nodes");
    const Count kx = g.degree(x);
    const Count ky = g.degree(y);
    if (kx == 0 || ky == 0) return 0.0;
    const Count numerator = (g.adjacent(x, y) ? 1 : 0) + g.common_neighbors(x, y);
    return normalize(static_cast<double>(numerator), kx, ky);
}

std::vector<std::pair<BlockId, BlockId>> candidate_pairs(const QuotientGraph& q) {
    const std::size_t h = q.block_count();
    std::vector<std::pair<BlockId, BlockId>> out;
    std::vector<char> seen(h, 0);
    std::vector<BlockId> touched;
    for (BlockId i = 0; i < h; ++i) {
        for (auto [k, e_ik] : q.rows[i]) {
            if (k > i && !seen[k]) {
                seen[k] = 1;
                touched.push_back(k);
            }
            for (auto [j, e_kj] : q.rows[k]) {
                if (j > i && !seen[j]) {
                    seen[j] = 1;
                    touched.push_back(j);
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        for (BlockId j : touched) {
            out.emplace_back(i, j);
            seen[j] = 0;
        }
        touched.clear();
    }
    return out;
}

SimilarityTable similarity_table(const QuotientGraph& q, std::span<const std::size_t> sizes, unsigned threads) {
    const std::size_t h = q.block_count();
    if (sizes.size() != h) throw std::invalid_argument("block sizes do not match the quotient");
    const RootRows flat(q, sizes);
    return build_rows(h, threads, [&](BlockId i, Scratch& s, std::vector<BlockId>& partners,
                                      std::vector<double>& values) {
        const Count d_i = q.degree_sum[i];
        if (d_i == 0) return;
        gather_quotient_row(q, flat, i, true, s);
        std::sort(s.touched.begin(), s.touched.end());
        for (BlockId j : s.touched) {
            const double value = normalize(s.direct[j] + s.acc[j], d_i, q.degree_sum[j]);
            if (value > 0.0) {
                partners.push_back(j);
                values.push_back(value);
            }
            s.clear(j);
        }
        s.touched.clear();
    });
}

SimilarityTable node_similarity_table(const Graph& g, unsigned threads) {
    const std::size_t n = g.node_count();
    return build_rows(n, threads, [&](NodeId x, Scratch& s, std::vector<BlockId>& partners,
                                      std::vector<double>& values) {
        const Count kx = g.degree(x);
        if (kx == 0) return;
        gather_node_row(g, x, true, s);
        std::sort(s.touched.begin(), s.touched.end());
        for (NodeId y : s.touched) {
            partners.push_back(y);
            values.push_back(normalize(s.acc[y], kx, g.degree(y)));
            s.acc[y] = 0.0;
        }
        s.touched.clear();
    });
}

std::vector<std::vector<BlockId>> maximal_partners(const QuotientGraph& q, std::span<const std::size_t> sizes,
                                                   double tolerance, unsigned threads) {
    const std::size_t h = q.block_count();
    if (sizes.size() != h) throw std::invalid_argument("block sizes do not match the quotient");
    const RootRows flat(q, sizes);
    const std::vector<double> inv_root = inverse_roots(q.degree_sum);
    const double keep = 1.0 - tolerance - kScreenSlack;

    // For a heavy middle k, the most a wedge through k can add to any screen, per unit of outer(i,k).
    std::vector<double> reach(h, -1.0);
    for (BlockId k = 0; k < h; ++k) {
        const auto row_k = flat.row(k);
        if (row_k.size() <= kHeavyRow) continue;
        double most = 0.0;
        for (std::size_t a = 0; a < row_k.size(); ++a)
            most = std::max(most, flat.inner[flat.offsets[k] + a] * inv_root[row_k[a]]);
        reach[k] = most;
    }

    auto numerator = [](const Scratch& s) { return [&s](BlockId j) { return s.direct[j] + s.acc[j]; }; };
    auto exact_from_gather = [&](BlockId i, SelectState& st) {
        Scratch& s = st.scratch;
        gather_quotient_row(q, flat, i, false, s);
        const double best = screen_touched(s, inv_root, keep, 0.0, numerator(s), st.shortlist);
        for (const Candidate& c : st.shortlist)
            if (c.screen >= best * keep)
                st.exact.emplace_back(c.partner, normalize(c.numerator, q.degree_sum[i], q.degree_sum[c.partner]));
    };

    return select_maximal(h, tolerance, threads, [&](BlockId i, SelectState& st) {
        if (q.degree_sum[i] == 0) return;
        const auto row_i = flat.row(i);
        const std::size_t base_i = flat.offsets[i];
        bool skipped = false;
        for (std::size_t a = 0; a < row_i.size(); ++a) skipped = skipped || reach[row_i[a]] >= 0.0;
        if (!skipped) {
            exact_from_gather(i, st);
            return;
        }

        // Light middles only; heavy ones contribute at most `bound` to any screen.
        Scratch& s = st.scratch;
        double bound = 0.0;
        for (std::size_t a = 0; a < row_i.size(); ++a) {
            s.touch(row_i[a]);
            s.direct[row_i[a]] = static_cast<double>(q.rows[i][a].second);
        }
        for (std::size_t a = 0; a < row_i.size(); ++a) {
            const BlockId k = row_i[a];
            const double w = flat.outer[base_i + a];
            if (reach[k] >= 0.0) {
                bound += w * reach[k];
                continue;
            }
            const auto row_k = flat.row(k);
            const double* inner = flat.inner.data() + flat.offsets[k];
            for (std::size_t b = 0; b < row_k.size(); ++b) {
                if (row_k[b] == i) continue;
                s.touch(row_k[b]);
                s.acc[row_k[b]] += w * inner[b];
            }
        }
        bound *= 1.0 + kScreenSlack;
        const double lower = screen_touched(s, inv_root, keep, bound, numerator(s), st.shortlist);
        if (bound >= lower * keep) {
            st.shortlist.clear();
            exact_from_gather(i, st);
            return;
        }
        for (const Candidate& c : st.shortlist)
            if (c.screen + bound >= lower * keep)
                st.exact.emplace_back(c.partner, normalize(merged_numerator(q, flat, i, c.partner),
                                                           q.degree_sum[i], q.degree_sum[c.partner]));
    });
}

std::vector<std::vector<NodeId>> maximal_node_partners(const Graph& g, double tolerance, unsigned threads) {
    const std::size_t n = g.node_count();
    std::vector<Count> degree(n);
    for (NodeId x = 0; x < n; ++x) degree[x] = g.degree(x);
    const std::vector<double> inv_root = inverse_roots(degree);
    const double keep = 1.0 - tolerance - kScreenSlack;
    return select_maximal(n, tolerance, threads, [&](NodeId x, SelectState& st) {
        if (degree[x] == 0) return;
        Scratch& s = st.scratch;
        gather_node_row(g, x, false, s);
        const double best =
            screen_touched<true>(s, inv_root, keep, 0.0, [&s](NodeId y) { return s.acc[y]; }, st.shortlist);
        for (const Candidate& c : st.shortlist)
            if (c.screen >= best * keep) st.exact.emplace_back(c.partner, normalize(c.numerator, degree[x], degree[c.partner]));
    });
}

}  // namespace simcomm
