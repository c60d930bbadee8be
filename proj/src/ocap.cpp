#include "wmd/ocap.hpp"

#include "wmd/error.hpp"
#include "wmd/parallel.hpp"
#include "wmd/tower_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>

namespace wmd {

SftGraph SftGraph::make(std::vector<std::vector<std::uint8_t>> adjacency, const std::vector<int>& marked) {
    SftGraph g;
    g.vertices = static_cast<int>(adjacency.size());
    if (g.vertices == 0) throw ValidationError("graph has no vertices");
    for (const auto& row : adjacency)
        if (static_cast<int>(row.size()) != g.vertices) throw ValidationError("adjacency matrix is not square");
    g.adjacency = std::move(adjacency);
    g = g.with_marked(marked);
    bool cyclic = false;
    for (const auto& comp : strongly_connected_components(g)) {
        const int v = comp.front();
        cyclic = cyclic || comp.size() > 1 || g.adjacency[v][v];
    }
    if (!cyclic) throw ValidationError("graph has no cycle, so it carries no orbit");
    return g;
}

SftGraph SftGraph::from_lists(const std::vector<std::vector<int>>& successors, const std::vector<int>& marked) {
    const int v = static_cast<int>(successors.size());
    std::vector<std::vector<std::uint8_t>> adjacency(successors.size(), std::vector<std::uint8_t>(successors.size(), 0));
    for (int u = 0; u < v; ++u)
        for (int w : successors[u]) {
            if (w < 0 || w >= v) throw ValidationError("edge " + std::to_string(u) + "->" + std::to_string(w) + " leaves the graph");
            adjacency[u][w] = 1;
        }
    return make(std::move(adjacency), marked);
}

SftGraph SftGraph::with_marked(const std::vector<int>& list) const {
    SftGraph g = *this;
    g.marked.assign(static_cast<std::size_t>(vertices), 0);
    for (int v : list) {
        if (v < 0 || v >= vertices) throw ValidationError("marked vertex " + std::to_string(v) + " is not in the graph");
        g.marked[v] = 1;
    }
    return g;
}

std::vector<int> SftGraph::marked_list() const {
    std::vector<int> out;
    for (int v = 0; v < vertices; ++v)
        if (marked[v]) out.push_back(v);
    return out;
}

std::vector<std::vector<int>> strongly_connected_components(const SftGraph& g) {
    const int n = g.vertices;
    std::vector<int> index(n, -1);
    std::vector<int> low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> out;
    int counter = 0;
    std::function<void(int)> visit = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (int w = 0; w < n; ++w) {
            if (!g.adjacency[v][w]) continue;
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> comp;
            int w = -1;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0) visit(v);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Karp: with D_k(v) the heaviest k-edge walk from a fixed source, the maximum
// cycle mean is max_v min_k (D_n(v) - D_k(v)) / (n - k).
Rational karp_max_mean(const SftGraph& g, const std::vector<int>& comp) {
    const int n = static_cast<int>(comp.size());
    constexpr long none = std::numeric_limits<long>::min();
    std::vector<std::vector<long>> d(static_cast<std::size_t>(n + 1), std::vector<long>(static_cast<std::size_t>(n), none));
    d[0][0] = 0;
    for (int k = 1; k <= n; ++k)
        for (int a = 0; a < n; ++a) {
            if (d[k - 1][a] == none) continue;
            for (int b = 0; b < n; ++b)
                if (g.adjacency[comp[a]][comp[b]])
                    d[k][b] = std::max(d[k][b], d[k - 1][a] + g.marked[comp[a]]);
        }
    std::optional<Rational> best;
    for (int v = 0; v < n; ++v) {
        if (d[n][v] == none) continue;
        std::optional<Rational> worst;
        for (int k = 0; k < n; ++k) {
            if (d[k][v] == none) continue;
            Rational r(d[n][v] - d[k][v], n - k);
            r.canonicalize();
            if (!worst || r < *worst) worst = r;
        }
        if (worst && (!best || *worst > *best)) best = worst;
    }
    return best.value_or(Rational(0));
}

bool has_cycle(const SftGraph& g, const std::vector<int>& comp) { return comp.size() > 1 || g.adjacency[comp[0]][comp[0]]; }

}  // namespace

Rational orbit_capacity(const SftGraph& graph) {
    const auto comps = strongly_connected_components(graph);
    std::vector<Rational> per(comps.size(), Rational(-1));
    parallel_for(comps.size(), [&](std::size_t k) {
        if (has_cycle(graph, comps[k])) per[k] = karp_max_mean(graph, comps[k]);
    });
    Rational best(0);
    for (const auto& r : per) best = std::max(best, r);
    return best;
}

Rational orbit_capacity_bruteforce(const SftGraph& graph, long max_len) {
    if (max_len < graph.vertices)
        throw DomainError("max_len " + std::to_string(max_len) + " is below the vertex count " + std::to_string(graph.vertices));
    Rational best(0);
    std::vector<char> used(static_cast<std::size_t>(graph.vertices), 0);
    // Simple cycles rooted at their smallest vertex.
    for (int root = 0; root < graph.vertices; ++root) {
        std::function<void(int, long, long)> walk = [&](int v, long length, long weight) {
            for (int w = root; w < graph.vertices; ++w) {
                if (!graph.adjacency[v][w]) continue;
                if (w == root) {
                    best = std::max(best, Rational(weight, length));
                } else if (!used[w] && length < max_len) {
                    used[w] = 1;
                    walk(w, length + 1, weight + graph.marked[w]);
                    used[w] = 0;
                }
            }
        };
        used[root] = 1;
        walk(root, 1, graph.marked[root]);
        used[root] = 0;
    }
    best.canonicalize();
    return best;
}

bool is_small(const SftGraph& graph) { return orbit_capacity(graph) == 0; }

OrbitBracket orbit_capacity_bracket(const SftGraph& graph, long horizon, std::size_t samples, std::uint64_t seed) {
    if (horizon < 1) throw DomainError("horizon must be positive");
    const int n = graph.vertices;
    OrbitBracket out;
    // Heaviest walk with `horizon` vertices.
    std::vector<long> best(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) best[v] = graph.marked[v];
    for (long step = 1; step < horizon; ++step) {
        std::vector<long> next(static_cast<std::size_t>(n), -1);
        for (int v = 0; v < n; ++v)
            for (int w = 0; w < n; ++w)
                if (graph.adjacency[v][w] && best[w] >= 0) next[v] = std::max(next[v], best[w] + graph.marked[v]);
        best = std::move(next);
    }
    long top = 0;
    for (long b : best) top = std::max(top, b);
    out.upper = Rational(top, horizon);
    out.upper.canonicalize();

    std::mt19937_64 rng(seed);
    std::vector<int> cyclic;
    for (const auto& comp : strongly_connected_components(graph))
        if (has_cycle(graph, comp)) cyclic.insert(cyclic.end(), comp.begin(), comp.end());
    std::uniform_int_distribution<std::size_t> start(0, cyclic.size() - 1);
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<int> path{cyclic[start(rng)]};
        std::vector<long> seen(static_cast<std::size_t>(n), -1);
        seen[path[0]] = 0;
        while (true) {
            std::vector<int> succ;
            for (int w = 0; w < n; ++w)
                if (graph.adjacency[path.back()][w]) succ.push_back(w);
            if (succ.empty()) break;
            std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
            const int w = succ[pick(rng)];
            if (seen[w] >= 0) {
                long weight = 0;
                for (std::size_t k = static_cast<std::size_t>(seen[w]); k < path.size(); ++k) weight += graph.marked[path[k]];
                Rational mean(weight, static_cast<long>(path.size()) - seen[w]);
                mean.canonicalize();
                out.lower = std::max(out.lower, mean);
                break;
            }
            seen[w] = static_cast<long>(path.size());
            path.push_back(w);
        }
        ++out.samples;
    }
    return out;
}

namespace {

std::vector<std::vector<int>> words_of_length(const SymbolicSystem& sys, long r) {
    std::vector<std::vector<int>> out;
    std::vector<int> word;
    std::function<void()> grow = [&]() {
        if (static_cast<long>(word.size()) == r) {
            out.push_back(word);
            return;
        }
        for (int a = 0; a < sys.alphabet; ++a) {
            if (!word.empty() && !sys.allowed(word.back(), a)) continue;
            word.push_back(a);
            grow();
            word.pop_back();
        }
    };
    grow();
    return out;
}

}  // namespace

BlockGraph higher_block_graph(const SymbolicSystem& system, long r, const std::vector<std::vector<int>>& marked_words) {
    if (r < 1) throw DomainError("block length must be positive");
    if (std::pow(static_cast<double>(system.alphabet), static_cast<double>(r)) > 1e6)
        throw DomainError("higher block recoding too large");
    BlockGraph out;
    out.words = words_of_length(system, r);
    const std::size_t n = out.words.size();
    std::vector<std::vector<std::uint8_t>> adjacency(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            adjacency[u][v] = std::equal(out.words[u].begin() + 1, out.words[u].end(), out.words[v].begin()) &&
                                      system.allowed(out.words[u].back(), out.words[v].back())
                                  ? 1
                                  : 0;
    std::vector<int> marked;
    for (const auto& w : marked_words) {
        if (static_cast<long>(w.size()) != r) throw DomainError("marked words must have length r");
        auto it = std::find(out.words.begin(), out.words.end(), w);
        if (it != out.words.end()) marked.push_back(static_cast<int>(it - out.words.begin()));
    }
    out.graph = SftGraph::make(std::move(adjacency), marked);
    return out;
}

std::vector<std::vector<int>> cylinder_boundary(const SymbolicSystem& system, const std::vector<int>& word, long offset,
                                                long resolution) {
    if (resolution < 0) throw DomainError("resolution must be nonnegative");
    for (int s : word)
        if (s < 0 || s >= system.alphabet) throw DomainError("cylinder word leaves the alphabet");
    const long lo = std::min(-resolution, offset);
    const long hi = std::max(resolution, offset + static_cast<long>(word.size()) - 1);
    // Is there an admissible word on [lo, hi] agreeing with u on [-R, R] whose
    // restriction to the cylinder window equals (want_inside) or differs from `word`?
    auto realizable = [&](const std::vector<int>& u, bool want_inside) {
        // State: (last symbol, whether a mismatch with `word` has been seen).
        std::vector<std::array<char, 2>> live(static_cast<std::size_t>(system.alphabet), {0, 0});
        for (long p = lo; p <= hi; ++p) {
            std::vector<std::array<char, 2>> next(static_cast<std::size_t>(system.alphabet), {0, 0});
            for (int a = 0; a < system.alphabet; ++a) {
                if (p >= -resolution && p <= resolution && u[static_cast<std::size_t>(p + resolution)] != a) continue;
                const bool in_window = p >= offset && p < offset + static_cast<long>(word.size());
                const bool mismatch = in_window && word[static_cast<std::size_t>(p - offset)] != a;
                for (int flag = 0; flag < 2; ++flag) {
                    bool reach = false;
                    if (p == lo) {
                        reach = flag == 0;
                    } else {
                        for (int b = 0; b < system.alphabet && !reach; ++b)
                            reach = live[b][flag] && system.allowed(b, a);
                    }
                    if (reach) next[a][flag || mismatch] = 1;
                }
            }
            live = std::move(next);
        }
        for (const auto& s : live)
            if (want_inside ? s[0] : s[1]) return true;
        return false;
    };
    std::vector<std::vector<int>> out;
    for (const auto& u : words_of_length(system, 2 * resolution + 1))
        if (realizable(u, true) && realizable(u, false)) out.push_back(u);
    return out;
}

SftGraph parse_graph(const std::string& text) {
    const auto doc = parse_json_document(text);
    if (!doc.is_object() || !doc.contains("successors") || !doc["successors"].is_array())
        throw ConfigError("$.successors", "expected an array of successor lists");
    std::vector<std::vector<int>> successors;
    for (std::size_t v = 0; v < doc["successors"].size(); ++v) {
        const auto& row = doc["successors"][v];
        const std::string path = "$.successors[" + std::to_string(v) + "]";
        if (!row.is_array()) throw ConfigError(path, "expected an array of vertex indices");
        std::vector<int> list;
        for (const auto& w : row) {
            if (!w.is_number_integer()) throw ConfigError(path, "expected integer vertex indices");
            list.push_back(w.get<int>());
        }
        successors.push_back(std::move(list));
    }
    std::vector<int> marked;
    if (doc.contains("E")) {
        if (!doc["E"].is_array()) throw ConfigError("$.E", "expected an array of vertex indices");
        for (const auto& v : doc["E"]) {
            if (!v.is_number_integer()) throw ConfigError("$.E", "expected integer vertex indices");
            marked.push_back(v.get<int>());
        }
    }
    return SftGraph::from_lists(successors, marked);
}

SftGraph load_graph(const std::string& path) { return parse_graph(read_text_file(path)); }

nlohmann::json graph_to_json(const SftGraph& graph) {
    nlohmann::json doc;
    doc["successors"] = nlohmann::json::array();
    for (int v = 0; v < graph.vertices; ++v) {
        nlohmann::json row = nlohmann::json::array();
        for (int w = 0; w < graph.vertices; ++w)
            if (graph.adjacency[v][w]) row.push_back(w);
        doc["successors"].push_back(row);
    }
    doc["E"] = graph.marked_list();
    return doc;
}

}  // namespace wmd
