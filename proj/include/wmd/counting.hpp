#pragma once

#include "wmd/numeric.hpp"
#include "wmd/tower.hpp"
#include "wmd/wmetric.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wmd {

// Certified bracket on a cardinality. When `exact` is set, lower == upper == *exact.
struct CountBounds {
    BigInt lower;
    BigInt upper;
    std::optional<BigInt> exact;

    static CountBounds of_exact(const BigInt& value);
    static CountBounds between(const BigInt& lower, const BigInt& upper);

    LogValue log_lower() const { return LogValue::log(lower); }
    LogValue log_upper() const { return LogValue::log(upper); }
};

// Finite subset K of X_1 together with its d_n^a distance enclosures.
class FiniteMetricInstance {
public:
    // Distances are computed once, in parallel, from the tower metric.
    static FiniteMetricInstance from_points(const Tower& tower, long n, std::vector<PointWindow> points);
    // Exact distances; checks symmetry, zero diagonal, nonnegativity and the triangle inequality.
    static FiniteMetricInstance from_matrix(const std::vector<std::vector<Rational>>& distances);

    std::size_t size() const { return size_; }
    const DistanceInterval& distance(std::size_t i, std::size_t j) const { return matrix_[i * size_ + j]; }
    const std::vector<PointWindow>& points() const { return points_; }

    // d(i, j) <= eps, decided from the enclosure; throws UnresolvedComparison otherwise.
    bool within(std::size_t i, std::size_t j, const Rational& eps) const;

private:
    std::size_t size_ = 0;
    std::vector<DistanceInterval> matrix_;
    std::vector<PointWindow> points_;
};

enum class CountMode { Exact, Greedy };

// Above this size exact mode degrades to greedy bounds (exact stays empty).
inline constexpr std::size_t kExactCutoff = 20;

// Minimum number of closed eps-balls centred at instance points covering the instance.
CountBounds spanning_number(const FiniteMetricInstance& instance, const Rational& eps, CountMode mode);

// Maximum size of a subset with pairwise d > eps.
CountBounds packing_number(const FiniteMetricInstance& instance, const Rational& eps, CountMode mode);

// Outcome of a separation audit. On failure (i, j) index the witnessing pair.
struct SeparationAudit {
    bool ok = true;
    std::size_t i = 0;
    std::size_t j = 0;
    DistanceInterval distance;
};

// Separation test: d > eps for every pair (strict), or d >= eps when strict is false.
SeparationAudit verify_separated(const std::vector<PointWindow>& points, const Tower& tower, long n,
                                 const Rational& eps, bool strict = true);

// Number of distinct tuples (u|L_1, tau_1(u)|L_2, ...) over admissible level-0 words u,
// with every window widened by `margin` on both sides. Exact.
CountBounds itinerary_count(const Tower& tower, long n, long margin = 0);

// Same count for explicit nondecreasing window lengths (one per level).
CountBounds itinerary_count_windows(const Tower& tower, const std::vector<long>& windows);

// Direct enumeration of every admissible word; refuses when alphabet^L exceeds `word_limit`.
BigInt itinerary_count_bruteforce(const Tower& tower, const std::vector<long>& windows,
                                  std::uint64_t word_limit = std::uint64_t{1} << 22);

// ---------------------------------------------------------------------------
// Cube towers

enum class CoverMode { Faithful, Tight };

// Grid cover by open boxes ((k-1)eps/12, (k+1)eps/12), k = 0..floor(12/eps), on
// a padded window; every other coordinate is left free.
struct CubeCover {
    CoverMode mode = CoverMode::Faithful;
    long n = 0;
    Rational eps;
    long pad = 0;        // l
    BigInt base;         // 1 + floor(12/eps)
    long exponent = 0;   // number of constrained coordinates
    CountBounds count;   // upper bound on the covering number
    Rational cell_diameter;  // exact d_n^a diameter of one cell
    bool certified = false;  // cell_diameter < eps and all sampled pairs inside
    std::size_t samples = 0;
    std::vector<CoordLabel> coords;  // constrained coordinates
};

CubeCover cube_cover_count(const Tower& tower, long n, const Rational& eps, CoverMode mode,
                           std::uint64_t seed = 0, std::size_t samples = 8);

// Product grid: every listed coordinate takes the values k * spacing, k < values;
// all other coordinates are zero.
struct GridFamily {
    std::vector<CoordLabel> coords;
    Rational spacing;
    long values = 1;
    int components = 1;

    BigInt size() const;
    // Family member number `index` in mixed radix (first coordinate least significant).
    PointWindow point(const BigInt& index) const;
    // Every member; refuses families larger than `limit`.
    std::vector<PointWindow> materialize(std::size_t limit = 4096) const;
};

struct GridAudit {
    bool ok = true;
    CoordLabel coord;
    PointWindow x;
    PointWindow y;
    DistanceInterval distance;
};

// d_n^a is nondecreasing in every coordinate difference, so a product grid is
// separated iff each single-coordinate neighbour pair is. Checks those pairs in
// (m, c) order and returns the first failure.
GridAudit verify_grid_family(const Tower& tower, long n, const GridFamily& family, const Rational& eps,
                             bool strict = true);

struct PackingGrid {
    GridFamily family;
    CountBounds count;  // lower bound on the separated number
    bool certified = false;
};

// Grid on the full-weight coordinates with the least dyadic spacing above eps.
PackingGrid cube_packing_grid(const Tower& tower, long n, const Rational& eps);

// All components on [0, L_k) with spacing eps and 1 + floor(1/eps) values: the
// family asserted to be eps-separated in the classical two-level example.
GridFamily claimed_grid_family(const Tower& tower, long n, const Rational& eps);

}  // namespace wmd
