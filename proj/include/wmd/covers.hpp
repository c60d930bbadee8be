#pragma once

#include "wmd/numeric.hpp"
#include "wmd/tower.hpp"
#include "wmd/wmetric.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace wmd {

// Open interval (lo, hi) read inside [0, 1]: it holds x in [0, 1] with lo < x < hi,
// so lo < 0 reaches the face x = 0 and hi > 1 reaches x = 1.
struct Interval {
    Rational lo{-1};
    Rational hi{2};

    static Interval whole() { return Interval{}; }

    bool contains(const Rational& x) const { return lo < x && x < hi; }
    bool nonempty() const { return lo < hi && lo < 1 && hi > 0; }
    bool spans() const { return lo < 0 && hi > 1; }
    Rational length() const;  // of the clamped interval
    Interval meet(const Interval& other) const;
    // Clamped containment: (this ∩ [0,1]) ⊆ (outer ∩ [0,1]).
    bool inside(const Interval& outer) const;
};

// Window cube [0,1]^D whose axes are labelled by coordinates (m, c) of `level`.
struct Ambient {
    std::size_t level = 0;
    std::vector<CoordLabel> coords;  // sorted, distinct

    std::size_t dimension() const { return coords.size(); }
    std::optional<std::size_t> index(const CoordLabel& c) const;
};

// One interval per ambient axis.
struct Box {
    std::vector<Interval> sides;

    bool whole() const;
};

class BoxCover {
public:
    // Checks shapes, drops nothing, and certifies coverage by an arrangement sweep.
    BoxCover(Ambient ambient, std::vector<Box> members);

    // Members already known to cover (joins, pullbacks); only shapes are checked.
    static BoxCover trusted(Ambient ambient, std::vector<Box> members);

    const Ambient& ambient() const { return ambient_; }
    const std::vector<Box>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

private:
    BoxCover() = default;
    void check_shapes() const;

    Ambient ambient_;
    std::vector<Box> members_;
};

// Largest clamped side length over all members.
Rational mesh_sup(const BoxCover& cover);

// Largest exact d_n^a diameter of a member; unlisted level-0 coordinates are free.
Rational mesh_bowen(const BoxCover& cover, const Tower& tower, long n);

// Exact maximum multiplicity, one sample point per cell of the endpoint arrangement.
std::size_t ord(const BoxCover& cover);

// All nonempty pairwise intersections on the union of the two ambients.
BoxCover join(const BoxCover& a, const BoxCover& b);

// Relabels a cover of level `level` coordinates (m, c) to level-0 coordinates
// (m + shift, c), reduced modulo the period on periodic cube levels.
BoxCover pullback_shift(const BoxCover& cover, const Tower& tower, std::size_t level, long shift);

// Bounds on D(alpha) = min ord over open refinements.
struct DBounds {
    std::size_t lower = 1;
    std::size_t upper = 1;
    bool weak = false;             // lower bound is only the trivial one
    bool brick_certified = false;  // upper bound witnessed by a checked brick refinement
    std::size_t spanning_free = 0; // |S|: axes no member spans
    std::size_t essential = 0;     // |E|: axes some member does not span

    bool exact() const { return lower == upper; }
};

DBounds d_bounds(const BoxCover& cover);

// Bounds for a ⋁ of many covers from their factors alone (no materialized join).
DBounds d_bounds_join(const std::vector<BoxCover>& factors);

// Brick pattern at scale 1/M on the essential axes, enlarged so its order stays at
// most |E| + 1, for the first M (doubling from 2 up to `max_scale`) whose bricks all
// fit inside members. Returns nullopt when no scale up to max_scale works.
std::optional<BoxCover> brick_refinement(const BoxCover& cover, long max_scale = 256);

// Per-n upper estimate of D(w({alpha_i}, T_1, n)) / n.
struct MdimRow {
    long n = 0;
    std::size_t dimension = 0;  // ambient dimension of the weighted join
    DBounds bounds;
    double ratio = 0.0;         // bounds.upper / n
};

struct MdimEstimate {
    std::vector<MdimRow> rows;
    double trend = 0.0;  // 1/n -> 0 intercept of the ratios (or the single ratio)
    double last = 0.0;
};

inline constexpr std::size_t kJoinDimensionCap = 24;

// covers[i] lives on level i coordinates. Refuses joins above `cap` axes.
MdimEstimate mdim_upper_estimate(const Tower& tower, const std::vector<BoxCover>& covers,
                                 const std::vector<long>& n_list, std::size_t cap = kJoinDimensionCap);

// Cover documents:
//   {"level": 0, "ambient": [[m, c], ...],
//    "members": [[{"coord": [m, c], "lo": "p/q", "hi": "p/q"}, ...], ...]}
// Axes a member does not mention are left whole.
BoxCover parse_cover(const nlohmann::json& doc, const std::string& path = "$");
BoxCover load_cover(const std::string& file);
// {"covers": [cover, ...]} with one cover per tower level.
std::vector<BoxCover> load_level_covers(const std::string& file);
nlohmann::json cover_to_json(const BoxCover& cover);

}  // namespace wmd
