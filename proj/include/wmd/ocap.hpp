#pragma once

#include "wmd/numeric.hpp"
#include "wmd/tower.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace wmd {

// Vertex shift on a directed graph with a 0/1 mark per vertex (the set E).
struct SftGraph {
    int vertices = 0;
    std::vector<std::vector<std::uint8_t>> adjacency;
    std::vector<std::uint8_t> marked;

    // Throws ValidationError on shape errors or when the graph has no cycle.
    static SftGraph make(std::vector<std::vector<std::uint8_t>> adjacency, const std::vector<int>& marked);
    static SftGraph from_lists(const std::vector<std::vector<int>>& successors, const std::vector<int>& marked);

    SftGraph with_marked(const std::vector<int>& marked) const;
    std::vector<int> marked_list() const;
};

// Strongly connected components (Tarjan), each sorted, listed by smallest vertex.
std::vector<std::vector<int>> strongly_connected_components(const SftGraph& graph);

// Exact max over cycles of (marked vertices on the cycle) / (cycle length),
// by Karp's recursion on every component that carries a cycle.
Rational orbit_capacity(const SftGraph& graph);

// Same maximum over simple cycles of length <= max_len by direct enumeration.
// Refuses max_len < V, where the answer could be short of the true maximum.
Rational orbit_capacity_bruteforce(const SftGraph& graph, long max_len);

bool is_small(const SftGraph& graph);

// Orbit-sampling bracket: lower from cycles closed by seeded random walks,
// upper from the best walk of `horizon` vertices.
struct OrbitBracket {
    Rational lower;
    Rational upper;
    std::size_t samples = 0;
};

OrbitBracket orbit_capacity_bracket(const SftGraph& graph, long horizon, std::size_t samples, std::uint64_t seed);

// Graph on admissible words of length r (overlapping by r-1), marking the given words.
struct BlockGraph {
    SftGraph graph;
    std::vector<std::vector<int>> words;
};

BlockGraph higher_block_graph(const SymbolicSystem& system, long r, const std::vector<std::vector<int>>& marked_words);

// Admissible words on positions [-R, R] whose cylinder meets both the cylinder
// {x : x[offset..offset+|word|) = word} and its complement.
std::vector<std::vector<int>> cylinder_boundary(const SymbolicSystem& system, const std::vector<int>& word, long offset,
                                                long resolution);

// Graph documents: {"successors": [[1], [0, 1]], "E": [1]}.
SftGraph parse_graph(const std::string& text);
SftGraph load_graph(const std::string& path);
nlohmann::json graph_to_json(const SftGraph& graph);

}  // namespace wmd
