#pragma once

#include "wmd/numeric.hpp"
#include "wmd/tower.hpp"

#include <compare>
#include <map>
#include <vector>

namespace wmd {

// Level-0 coordinate: time index m and component c (0-based).
struct CoordLabel {
    long m = 0;
    int c = 0;

    auto operator<=>(const CoordLabel&) const = default;
};

// How a point continues outside its support [-W, W].
//   Zero:    the point is the zero-filled sequence (exact distances).
//   Unknown: the tail is arbitrary; distances become enclosures.
enum class Tail { Zero, Unknown };

// A finitely described point of X_1: symbols for symbolic towers, rationals in
// [0,1] per component for cube towers.
class PointWindow {
public:
    static PointWindow symbolic(long radius, std::vector<int> symbols, Tail tail = Tail::Zero);
    // values[m + radius][c]
    static PointWindow cube(long radius, std::vector<std::vector<Rational>> values, Tail tail = Tail::Zero);
    static PointWindow zero_cube(int components, long radius, Tail tail = Tail::Zero);

    bool is_cube() const { return cube_; }
    long radius() const { return radius_; }
    Tail tail() const { return tail_; }
    int components() const { return components_; }

    bool known(long m) const { return tail_ == Tail::Zero || (m >= -radius_ && m <= radius_); }
    int symbol(long m) const;
    const Rational& value(long m, int c) const;

    // Copy with coordinate (m, c) set to v; the support grows when m lies outside it.
    PointWindow with_value(long m, int c, const Rational& v) const;
    PointWindow with_symbol(long m, int symbol) const;

private:
    bool cube_ = false;
    long radius_ = 0;
    int components_ = 1;
    Tail tail_ = Tail::Zero;
    std::vector<int> symbols_;
    std::vector<Rational> values_;
};

// Enclosure [lo, hi] of a distance value.
struct DistanceInterval {
    Rational lo;
    Rational hi;

    bool exact() const { return lo == hi; }
};

// Checks the point against level 0 of the tower (kind, alphabet, component count, value range).
void check_point(const Tower& tower, const PointWindow& x);

// Enclosure of d_n^a(x, y) = sup over levels i and 0 <= j < L_i of d_i(T^j tau x, T^j tau y).
DistanceInterval bowen_distance(const Tower& tower, const PointWindow& x, const PointWindow& y, long n);

enum class Membership { Inside, Outside, Unresolved };

// Decides d < eps from an enclosure: inside iff hi < eps, outside iff lo >= eps.
Membership classify_below(const DistanceInterval& d, const Rational& eps);

Membership bowen_ball_membership(const Tower& tower, const PointWindow& center, const PointWindow& y, long n,
                                 const Rational& eps);

// Sensitivity of d_n^a to coordinate (m, c): 2^-dist(m, [0, L)) where L is
// the longest window among levels that see component c. A coordinate that
// differs by delta alone moves d_n^a by exactly weight * delta.
Rational profile_weight(const Tower& tower, long n, const CoordLabel& coord);

// Window [0, L_c) in which component c is seen at full weight.
long component_window(const Tower& tower, long n, int component);

// {(m, c) : w(m, c) >= eps}; every coordinate outside contributes < eps on its own.
using PrecisionProfile = std::map<CoordLabel, Rational>;
PrecisionProfile precision_profile(const Tower& tower, long n, const Rational& eps);

// Exact d_n^a diameter of an open cylinder box whose side in coordinate (m, c)
// is sides[(m, c)] and 1 in every unlisted coordinate (infinite tails summed in
// closed form).
Rational cylinder_diameter(const Tower& tower, long n, const std::map<CoordLabel, Rational>& sides);

}  // namespace wmd
