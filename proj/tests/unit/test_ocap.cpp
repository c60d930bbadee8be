#include "generators.hpp"

#include "wmd/error.hpp"
#include "wmd/ocap.hpp"

#include <doctest.h>

#include <algorithm>

using namespace wmd;
using namespace wmd::test;

namespace {

// Independent oracle: best mean over closed walks of length <= 2V, by walk DP.
Rational closed_walk_oracle(const SftGraph& g) {
    const int n = g.vertices;
    Rational best(0);
    for (int s = 0; s < n; ++s) {
        std::vector<long> w(n, -1);
        w[s] = g.marked[s];
        for (int len = 1; len <= 2 * n; ++len) {
            std::vector<long> next(n, -1);
            for (int a = 0; a < n; ++a)
                if (w[a] >= 0)
                    for (int b = 0; b < n; ++b)
                        if (g.adjacency[a][b]) next[b] = std::max(next[b], w[a] + g.marked[b]);
            if (next[s] >= 0) {
                Rational mean(next[s] - g.marked[s], len);
                mean.canonicalize();
                best = std::max(best, mean);
            }
            w = next;
        }
    }
    return best;
}

}  // namespace

TEST_SUITE("ocap") {

TEST_CASE("reference graphs") {
    auto full = SftGraph::from_lists({{0, 1}, {0, 1}}, {1});
    CHECK(orbit_capacity(full) == 1);
    auto golden = load_graph(data("golden_graph.json"));
    CHECK(orbit_capacity(golden) == Rational(1, 2));
    CHECK(orbit_capacity_bruteforce(golden, 2) == Rational(1, 2));
    CHECK(orbit_capacity(golden.with_marked({})) == 0);
    auto complete3 = SftGraph::from_lists({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}, {0});
    CHECK(orbit_capacity_bruteforce(complete3, 3) == 1);
    auto cycle = SftGraph::from_lists({{1}, {2}, {0}}, {0});
    CHECK(orbit_capacity_bruteforce(cycle, 3) == Rational(1, 3));
    CHECK(orbit_capacity(cycle) == Rational(1, 3));
}

TEST_CASE("smallness") {
    auto cycle = SftGraph::from_lists({{1}, {2}, {0}}, {});
    CHECK(is_small(cycle));
    CHECK_FALSE(is_small(cycle.with_marked({2})));
    // vertex 3 feeds the cycle but lies on none
    auto tail = SftGraph::from_lists({{1}, {2}, {0}, {0}}, {3});
    CHECK(is_small(tail));
    auto comps = strongly_connected_components(tail);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<int>{0, 1, 2});
    CHECK(comps[1] == std::vector<int>{3});
}

TEST_CASE("Karp agrees with enumeration and walk oracle") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 150; ++trial) {
        auto g = random_graph(rng);
        Rational karp = orbit_capacity(g);
        CHECK(karp == orbit_capacity_bruteforce(g, g.vertices));
        CHECK(karp == closed_walk_oracle(g));
        CHECK(karp >= 0);
        CHECK(karp <= 1);
    }
}

TEST_CASE("capacity is monotone and subadditive in E") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = random_graph(rng);
        std::vector<int> a;
        std::vector<int> b;
        for (int v = 0; v < g.vertices; ++v) {
            if (rng() % 2) a.push_back(v);
            if (rng() % 2) b.push_back(v);
        }
        std::vector<int> both;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
        Rational ca = orbit_capacity(g.with_marked(a));
        Rational cb = orbit_capacity(g.with_marked(b));
        Rational cu = orbit_capacity(g.with_marked(both));
        CHECK(ca <= cu);
        CHECK(cu <= ca + cb);
    }
}

TEST_CASE("sampling bracket contains the capacity") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = random_graph(rng);
        auto br = orbit_capacity_bracket(g, 24, 64, 7 + trial);
        Rational c = orbit_capacity(g);
        CHECK(br.lower <= c);
        CHECK(c <= br.upper);
        CHECK(br.samples == 64);
    }
    auto golden = load_graph(data("golden_graph.json"));
    auto a = orbit_capacity_bracket(golden, 10, 32, 3);
    auto b = orbit_capacity_bracket(golden, 10, 32, 3);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == Rational(1, 2));
}

TEST_CASE("higher block graphs") {
    auto golden = SymbolicSystem::sft({{1, 1}, {1, 0}});
    auto blocks = higher_block_graph(golden, 2, {{0, 1}, {1, 0}});
    CHECK(blocks.words.size() == 3);
    // words 01 and 10 alternate on the cycle 01 -> 10 -> 01
    CHECK(orbit_capacity(blocks.graph) == 1);
    auto only = higher_block_graph(golden, 2, {{1, 0}});
    CHECK(orbit_capacity(only.graph) == Rational(1, 2));
    CHECK_THROWS_AS(higher_block_graph(golden, 2, {{1}}), DomainError);
}

TEST_CASE("cylinder boundaries") {
    auto full = SymbolicSystem::full(2);
    CHECK(cylinder_boundary(full, {1}, 0, 2).empty());
    CHECK(cylinder_boundary(full, {1}, 5, 1).size() == 8);
    auto golden = SymbolicSystem::sft({{1, 1}, {1, 0}});
    auto edge = cylinder_boundary(golden, {1}, 2, 1);
    CHECK(edge.size() == 3);
    for (const auto& u : edge) CHECK(u[2] == 0);
}

TEST_CASE("graph documents") {
    auto g = load_graph(data("golden_graph.json"));
    CHECK(g.vertices == 2);
    CHECK(g.marked_list() == std::vector<int>{1});
    auto again = parse_graph(graph_to_json(g).dump());
    CHECK(graph_to_json(again) == graph_to_json(g));
    CHECK_THROWS_AS(parse_graph(R"({"successors": [[1], []]})"), ValidationError);
    CHECK_THROWS_AS(parse_graph(R"({"successors": [[2]]})"), ValidationError);
    CHECK_THROWS_AS(parse_graph(R"({"E": [0]})"), ConfigError);
    CHECK_THROWS_AS(orbit_capacity_bruteforce(g, 1), DomainError);
}

}
