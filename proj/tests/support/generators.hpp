#pragma once

// Seeded random inputs shared by the unit and acceptance suites.

#include "fixtures.hpp"

#include "wmd/counting.hpp"
#include "wmd/covers.hpp"
#include "wmd/error.hpp"
#include "wmd/ocap.hpp"

#include <algorithm>
#include <random>

namespace wmd::test {

inline Rational fraction(unsigned long p, unsigned long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

// Essential SFT on 2..4 symbols followed by up to two random onto merges whose
// targets carry exactly the image transitions.
inline Tower random_symbolic_tower(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> qpick(2, 4);
    const int q = qpick(rng);
    std::vector<std::vector<std::uint8_t>> m(q, std::vector<std::uint8_t>(q, 0));
    std::bernoulli_distribution edge(0.55);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) m[a][b] = edge(rng);
    for (int a = 0; a < q; ++a) m[a][(a + 1) % q] = 1;
    std::vector<System> levels{SymbolicSystem::sft(m)};
    std::vector<ForgetfulFactor> factors;
    std::uniform_int_distribution<int> depth_pick(1, 3);
    const int depth = depth_pick(rng);
    std::vector<Rational> weights{fraction(1 + rng() % 3, 1 + rng() % 2)};
    int alphabet = q;
    auto current = m;
    for (int level = 1; level < depth; ++level) {
        const int r = 1 + static_cast<int>(rng() % static_cast<unsigned>(alphabet));
        std::vector<int> map(alphabet);
        for (int a = 0; a < alphabet; ++a) map[a] = a < r ? a : static_cast<int>(rng() % static_cast<unsigned>(r));
        std::shuffle(map.begin(), map.end(), rng);
        std::vector<std::vector<std::uint8_t>> image(r, std::vector<std::uint8_t>(r, 0));
        for (int a = 0; a < alphabet; ++a)
            for (int b = 0; b < alphabet; ++b)
                if (current[a][b]) image[map[a]][map[b]] = 1;
        levels.push_back(SymbolicSystem::sft(image));
        factors.push_back(ForgetfulFactor::merge(map));
        weights.push_back(fraction(rng() % 3, 1 + rng() % 3));
        current = image;
        alphabet = r;
    }
    return Tower(levels, factors, WeightVector(weights));
}

// Random digraph on 1..max_vertices vertices with at least one cycle.
inline SftGraph random_graph(std::mt19937_64& rng, int max_vertices = 6) {
    std::uniform_int_distribution<int> vpick(1, max_vertices);
    std::bernoulli_distribution edge(0.3);
    std::bernoulli_distribution mark(0.4);
    while (true) {
        const int v = vpick(rng);
        std::vector<std::vector<std::uint8_t>> adj(v, std::vector<std::uint8_t>(v, 0));
        std::vector<int> marked;
        for (int a = 0; a < v; ++a) {
            for (int b = 0; b < v; ++b) adj[a][b] = edge(rng);
            if (mark(rng)) marked.push_back(a);
        }
        try {
            return SftGraph::make(adj, marked);
        } catch (const ValidationError&) {
        }
    }
}

// Chain of overlapping intervals from below 0 to above 1, plus random extras.
inline BoxCover random_interval_cover(std::mt19937_64& rng, CoordLabel axis, std::size_t level = 0) {
    std::uniform_int_distribution<int> pieces(1, 5);
    const int k = pieces(rng);
    std::vector<Rational> cuts{0};
    for (int i = 1; i < k; ++i) cuts.push_back(random_unit(rng, 5));
    cuts.push_back(1);
    std::sort(cuts.begin(), cuts.end());
    const Rational slack(1, 64);
    std::vector<Box> members;
    for (int i = 0; i < k; ++i) members.push_back(Box{{Interval{cuts[i] - slack, cuts[i + 1] + slack}}});
    std::bernoulli_distribution extra(0.4);
    while (extra(rng)) {
        Rational a = random_unit(rng, 5);
        Rational b = random_unit(rng, 5);
        if (a > b) std::swap(a, b);
        members.push_back(Box{{Interval{a - slack, b + slack}}});
    }
    std::shuffle(members.begin(), members.end(), rng);
    return BoxCover(Ambient{level, {axis}}, members);
}

// Points of the unit square under the sup metric, as an exact distance matrix.
inline FiniteMetricInstance random_plane(std::mt19937_64& rng, std::size_t size) {
    std::vector<std::pair<Rational, Rational>> p;
    for (std::size_t i = 0; i < size; ++i) p.emplace_back(random_unit(rng, 4), random_unit(rng, 4));
    std::vector<std::vector<Rational>> d(size, std::vector<Rational>(size));
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) {
            Rational dx = abs(p[i].first - p[j].first);
            Rational dy = abs(p[i].second - p[j].second);
            d[i][j] = std::max(dx, dy);
        }
    return FiniteMetricInstance::from_matrix(d);
}

// Random points of X_1 for a one-component cube tower, with exact distances.
inline FiniteMetricInstance random_sequences(std::mt19937_64& rng, const Tower& tower, long n, std::size_t size) {
    std::vector<PointWindow> pts;
    for (std::size_t i = 0; i < size; ++i) {
        std::vector<std::vector<Rational>> rows(3);
        for (auto& row : rows) row.push_back(random_unit(rng, 3));
        pts.push_back(PointWindow::cube(1, rows));
    }
    return FiniteMetricInstance::from_points(tower, n, pts);
}

}  // namespace wmd::test
