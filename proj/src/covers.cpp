#include "wmd/covers.hpp"

#include "wmd/error.hpp"
#include "wmd/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <set>

namespace wmd {

Rational Interval::length() const {
    Rational a = std::max(lo, Rational(0));
    Rational b = std::min(hi, Rational(1));
    return b > a ? Rational(b - a) : Rational(0);
}

Interval Interval::meet(const Interval& other) const { return Interval{std::max(lo, other.lo), std::min(hi, other.hi)}; }

bool Interval::inside(const Interval& outer) const {
    if (!nonempty()) return true;
    const bool left = lo < 0 ? outer.lo < 0 : outer.lo <= lo;
    const bool right = hi > 1 ? outer.hi > 1 : outer.hi >= hi;
    return left && right;
}

std::optional<std::size_t> Ambient::index(const CoordLabel& c) const {
    auto it = std::lower_bound(coords.begin(), coords.end(), c);
    if (it == coords.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - coords.begin());
}

bool Box::whole() const {
    return std::all_of(sides.begin(), sides.end(), [](const Interval& s) { return s.spans(); });
}

namespace {

// Dynamic bitset over members.
struct Bits {
    std::vector<std::uint64_t> words;

    explicit Bits(std::size_t n = 0, bool full = false) : words((n + 63) / 64, full ? ~std::uint64_t{0} : 0) {
        if (full && n % 64) words.back() = (std::uint64_t{1} << (n % 64)) - 1;
    }
    void set(std::size_t i) { words[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool any() const {
        return std::any_of(words.begin(), words.end(), [](std::uint64_t w) { return w != 0; });
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool intersects(const Bits& o) const {
        for (std::size_t k = 0; k < words.size(); ++k)
            if (words[k] & o.words[k]) return true;
        return false;
    }
    Bits operator&(const Bits& o) const {
        Bits out;
        out.words.resize(words.size());
        for (std::size_t k = 0; k < words.size(); ++k) out.words[k] = words[k] & o.words[k];
        return out;
    }
};

// Sample points of the cells cut out of [0, 1] by the given endpoints:
// every breakpoint and the midpoint of every gap.
std::vector<Rational> cell_samples(std::vector<Rational> cuts) {
    cuts.push_back(0);
    cuts.push_back(1);
    std::vector<Rational> points;
    for (const auto& c : cuts)
        if (c >= 0 && c <= 1) points.push_back(c);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::vector<Rational> out;
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (k > 0) out.push_back((points[k - 1] + points[k]) / 2);
        out.push_back(points[k]);
    }
    return out;
}

// Arrangement of a box family: per axis, per sample, the members containing it.
struct Arrangement {
    std::size_t members = 0;
    std::vector<std::vector<Rational>> samples;
    std::vector<std::vector<Bits>> holders;
    std::vector<Bits> free_from;  // members whole on every axis >= k

    Arrangement(const std::vector<const Box*>& boxes, std::size_t dimension, const Box* region) {
        members = boxes.size();
        samples.resize(dimension);
        holders.resize(dimension);
        for (std::size_t d = 0; d < dimension; ++d) {
            std::vector<Rational> cuts;
            for (const Box* b : boxes) {
                cuts.push_back(b->sides[d].lo);
                cuts.push_back(b->sides[d].hi);
            }
            for (auto& s : cell_samples(std::move(cuts))) {
                if (region && !region->sides[d].contains(s)) continue;
                Bits hold(members);
                for (std::size_t i = 0; i < members; ++i)
                    if (boxes[i]->sides[d].contains(s)) hold.set(i);
                samples[d].push_back(s);
                holders[d].push_back(std::move(hold));
            }
        }
        free_from.assign(dimension + 1, Bits(members));
        free_from[dimension] = Bits(members, true);
        for (std::size_t d = dimension; d-- > 0;) {
            free_from[d] = free_from[d + 1];
            for (std::size_t i = 0; i < members; ++i)
                if (!boxes[i]->sides[d].spans()) free_from[d].words[i / 64] &= ~(std::uint64_t{1} << (i % 64));
        }
    }

    std::size_t dimension() const { return samples.size(); }

    // First uncovered sample point, if any.
    std::optional<std::vector<Rational>> hole() const {
        std::vector<Rational> point(dimension());
        std::function<bool(std::size_t, const Bits&)> walk = [&](std::size_t d, const Bits& live) {
            if (!live.any()) return false;
            if (d == dimension() || live.intersects(free_from[d])) return true;
            for (std::size_t k = 0; k < samples[d].size(); ++k) {
                point[d] = samples[d][k];
                if (!walk(d + 1, live & holders[d][k])) return false;
            }
            return true;
        };
        if (walk(0, Bits(members, true))) return std::nullopt;
        return point;
    }

    std::size_t depth() const {
        std::size_t best = 0;
        std::function<void(std::size_t, const Bits&)> walk = [&](std::size_t d, const Bits& live) {
            const std::size_t c = live.count();
            if (c <= best) return;
            if (d == dimension()) {
                best = c;
                return;
            }
            for (std::size_t k = 0; k < samples[d].size(); ++k) walk(d + 1, live & holders[d][k]);
        };
        walk(0, Bits(members, true));
        return best;
    }
};

std::vector<const Box*> pointers(const std::vector<Box>& boxes) {
    std::vector<const Box*> out;
    for (const auto& b : boxes) out.push_back(&b);
    return out;
}

std::string render_point(const Ambient& ambient, const std::vector<Rational>& point) {
    std::string out;
    for (std::size_t d = 0; d < point.size(); ++d) {
        if (d) out += ", ";
        out += "(" + std::to_string(ambient.coords[d].m) + "," + std::to_string(ambient.coords[d].c) +
               ")=" + to_string(point[d]);
    }
    return out;
}

}  // namespace

BoxCover::BoxCover(Ambient ambient, std::vector<Box> members) : ambient_(std::move(ambient)), members_(std::move(members)) {
    check_shapes();
    Arrangement arr(pointers(members_), ambient_.dimension(), nullptr);
    if (auto hole = arr.hole())
        throw ValidationError("cover misses the point " + render_point(ambient_, *hole));
}

BoxCover BoxCover::trusted(Ambient ambient, std::vector<Box> members) {
    BoxCover cover;
    cover.ambient_ = std::move(ambient);
    cover.members_ = std::move(members);
    cover.check_shapes();
    return cover;
}

void BoxCover::check_shapes() const {
    for (std::size_t d = 1; d < ambient_.coords.size(); ++d)
        if (!(ambient_.coords[d - 1] < ambient_.coords[d])) throw ValidationError("ambient axes must be sorted and distinct");
    if (members_.empty()) throw ValidationError("a cover needs at least one member");
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i].sides.size() != ambient_.dimension())
            throw ValidationError("member " + std::to_string(i + 1) + " has the wrong number of sides");
        for (const auto& s : members_[i].sides)
            if (!s.nonempty()) throw ValidationError("member " + std::to_string(i + 1) + " is empty in [0,1]");
    }
}

Rational mesh_sup(const BoxCover& cover) {
    Rational best(0);
    for (const auto& b : cover.members()) {
        if (cover.ambient().dimension() == 0) best = 1;
        for (const auto& s : b.sides) best = std::max(best, s.length());
    }
    return best;
}

Rational mesh_bowen(const BoxCover& cover, const Tower& tower, long n) {
    if (cover.ambient().level != 0) throw DomainError("the Bowen mesh needs a cover on level-1 coordinates");
    Rational best(0);
    for (const auto& b : cover.members()) {
        std::map<CoordLabel, Rational> sides;
        for (std::size_t d = 0; d < b.sides.size(); ++d) sides.emplace(cover.ambient().coords[d], b.sides[d].length());
        best = std::max(best, cylinder_diameter(tower, n, sides));
    }
    return best;
}

std::size_t ord(const BoxCover& cover) {
    return Arrangement(pointers(cover.members()), cover.ambient().dimension(), nullptr).depth();
}

namespace {

Box widen(const Box& box, const Ambient& from, const Ambient& to) {
    Box out;
    out.sides.assign(to.dimension(), Interval::whole());
    for (std::size_t d = 0; d < from.dimension(); ++d) out.sides[*to.index(from.coords[d])] = box.sides[d];
    return out;
}

Ambient merged(const Ambient& a, const Ambient& b) {
    if (a.level != b.level) throw DomainError("covers live on different levels");
    Ambient out;
    out.level = a.level;
    std::set_union(a.coords.begin(), a.coords.end(), b.coords.begin(), b.coords.end(), std::back_inserter(out.coords));
    return out;
}

}  // namespace

BoxCover join(const BoxCover& a, const BoxCover& b) {
    Ambient ambient = merged(a.ambient(), b.ambient());
    std::vector<Box> wa;
    std::vector<Box> wb;
    for (const auto& x : a.members()) wa.push_back(widen(x, a.ambient(), ambient));
    for (const auto& y : b.members()) wb.push_back(widen(y, b.ambient(), ambient));
    std::vector<Box> members;
    for (const auto& x : wa)
        for (const auto& y : wb) {
            Box m;
            bool keep = true;
            for (std::size_t d = 0; d < ambient.dimension() && keep; ++d) {
                m.sides.push_back(x.sides[d].meet(y.sides[d]));
                keep = m.sides.back().nonempty();
            }
            if (keep) members.push_back(std::move(m));
        }
    return BoxCover::trusted(std::move(ambient), std::move(members));
}

BoxCover pullback_shift(const BoxCover& cover, const Tower& tower, std::size_t level, long shift) {
    require_valid(tower);
    if (!tower.is_cube()) throw DomainError("pullbacks are defined for cube towers");
    if (level >= tower.depth()) throw DomainError("level out of range");
    if (cover.ambient().level != level) throw DomainError("cover does not live on the requested level");
    const int visible = tower.visible_components(level);
    const long period = tower.cube(0).period;
    std::vector<CoordLabel> image;
    for (const auto& c : cover.ambient().coords) {
        if (c.c < 0 || c.c >= visible)
            throw DomainError("component " + std::to_string(c.c) + " does not exist on level " + std::to_string(level + 1));
        long m = c.m + shift;
        if (period > 0) m = ((m % period) + period) % period;
        image.push_back(CoordLabel{m, c.c});
    }
    Ambient ambient;
    ambient.level = 0;
    ambient.coords = image;
    std::sort(ambient.coords.begin(), ambient.coords.end());
    ambient.coords.erase(std::unique(ambient.coords.begin(), ambient.coords.end()), ambient.coords.end());
    std::vector<Box> members;
    for (const auto& b : cover.members()) {
        Box m;
        m.sides.assign(ambient.dimension(), Interval::whole());
        for (std::size_t d = 0; d < image.size(); ++d) {
            auto& side = m.sides[*ambient.index(image[d])];
            side = side.meet(b.sides[d]);
        }
        if (std::all_of(m.sides.begin(), m.sides.end(), [](const Interval& s) { return s.nonempty(); }))
            members.push_back(std::move(m));
    }
    // Periodic folding identifies axes; members that became empty are dropped but
    // the remaining ones still cover, because folded points are diagonal points.
    return BoxCover::trusted(std::move(ambient), std::move(members));
}

// ---------------------------------------------------------------------------
// Refinement dimension

namespace {

struct AxisSplit {
    std::vector<std::size_t> free;       // no member spans
    std::vector<std::size_t> essential;  // some member does not span
    bool has_whole = false;
};

AxisSplit split_axes(const BoxCover& cover) {
    AxisSplit out;
    for (const auto& b : cover.members()) out.has_whole = out.has_whole || b.whole();
    for (std::size_t d = 0; d < cover.ambient().dimension(); ++d) {
        bool any_spans = false;
        bool all_span = true;
        for (const auto& b : cover.members()) {
            any_spans = any_spans || b.sides[d].spans();
            all_span = all_span && b.sides[d].spans();
        }
        if (!any_spans) out.free.push_back(d);
        if (!all_span) out.essential.push_back(d);
    }
    return out;
}

constexpr std::size_t kBrickLimit = 40000;

struct BrickPattern {
    std::vector<Box> bricks;
    std::vector<std::vector<long>> index;  // per brick, grid index on each essential axis
};

// Bricks [k h + o, (k+1) h + o] on each essential axis, with the offset o of axis e
// depending on the indices of later axes, widened by h/8 on every side.
BrickPattern bricks_at(std::size_t dimension, const std::vector<std::size_t>& axes, long scale) {
    BrickPattern out;
    const Rational h(1, scale);
    const Rational pad = h / 8;
    const std::size_t e = axes.size();
    std::vector<long> k(e, -1);
    while (true) {
        Box b;
        b.sides.assign(dimension, Interval::whole());
        bool keep = true;
        for (std::size_t a = 0; a < e; ++a) {
            Rational shift(0);
            for (std::size_t later = a + 1; later < e; ++later) shift += Rational(k[later]) * pow2(-static_cast<long>(later - a));
            shift -= Rational(floor_of(shift));
            const Rational lo = (Rational(k[a]) + shift) * h;
            Interval side{lo - pad, lo + h + pad};
            keep = keep && side.nonempty();
            b.sides[axes[a]] = side;
        }
        if (keep) {
            out.bricks.push_back(std::move(b));
            out.index.push_back(k);
        }
        std::size_t a = 0;
        while (a < e && ++k[a] > scale) k[a++] = -1;
        if (a == e) break;
    }
    return out;
}

// Order of a brick pattern: the deepest point of each brick only meets bricks
// with nearby indices, so each brick is swept against its neighbourhood.
std::size_t brick_order(const BrickPattern& pattern, std::size_t dimension) {
    std::map<std::vector<long>, std::size_t> where;
    for (std::size_t i = 0; i < pattern.bricks.size(); ++i) where.emplace(pattern.index[i], i);
    std::vector<std::size_t> local(pattern.bricks.size(), 0);
    parallel_for(pattern.bricks.size(), [&](std::size_t i) {
        const auto& key = pattern.index[i];
        std::vector<const Box*> near;
        std::vector<long> probe(key.size());
        std::function<void(std::size_t)> visit = [&](std::size_t a) {
            if (a == key.size()) {
                auto it = where.find(probe);
                if (it == where.end()) return;
                const Box& other = pattern.bricks[it->second];
                for (std::size_t d = 0; d < dimension; ++d)
                    if (!pattern.bricks[i].sides[d].meet(other.sides[d]).nonempty()) return;
                near.push_back(&other);
                return;
            }
            for (long dk = -2; dk <= 2; ++dk) {
                probe[a] = key[a] + dk;
                visit(a + 1);
            }
        };
        visit(0);
        local[i] = Arrangement(near, dimension, &pattern.bricks[i]).depth();
    });
    return local.empty() ? 0 : *std::max_element(local.begin(), local.end());
}

std::optional<BrickPattern> fitting_bricks(const BoxCover& cover, const std::vector<std::size_t>& axes, long max_scale) {
    for (long scale = 2; scale <= max_scale; scale *= 2) {
        BigInt count = pow(BigInt(scale + 2), static_cast<unsigned long>(axes.size()));
        if (count > BigInt(static_cast<unsigned long>(kBrickLimit))) break;
        auto pattern = bricks_at(cover.ambient().dimension(), axes, scale);
        bool fits = true;
        for (const auto& brick : pattern.bricks) {
            bool found = false;
            for (const auto& m : cover.members()) {
                bool in = true;
                for (std::size_t a : axes) in = in && brick.sides[a].inside(m.sides[a]);
                if (in) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                fits = false;
                break;
            }
        }
        if (fits) return pattern;
    }
    return std::nullopt;
}

}  // namespace

std::optional<BoxCover> brick_refinement(const BoxCover& cover, long max_scale) {
    const auto axes = split_axes(cover);
    auto pattern = fitting_bricks(cover, axes.essential, max_scale);
    if (!pattern) return std::nullopt;
    return BoxCover::trusted(cover.ambient(), std::move(pattern->bricks));
}

DBounds d_bounds(const BoxCover& cover) {
    const auto axes = split_axes(cover);
    DBounds out;
    out.spanning_free = axes.free.size();
    out.essential = axes.essential.size();
    if (axes.has_whole) {
        out.brick_certified = true;
        return out;
    }
    // [0,1]^D is connected, so a refinement of order 1 would be a single whole member.
    out.lower = std::max<std::size_t>(2, axes.free.size() + 1);
    out.weak = axes.free.empty();
    const std::size_t order = ord(cover);
    // A covering subfamily is itself a refinement; keeping only members that
    // span an axis removes that axis from the essential set.
    BoxCover reduced = cover;
    for (std::size_t d = 0; d < cover.ambient().dimension(); ++d) {
        std::vector<const Box*> spanning;
        for (const auto& b : reduced.members())
            if (b.sides[d].spans()) spanning.push_back(&b);
        if (spanning.empty() || spanning.size() == reduced.size()) continue;
        if (Arrangement(spanning, cover.ambient().dimension(), nullptr).hole()) continue;
        std::vector<Box> kept;
        for (const Box* b : spanning) kept.push_back(*b);
        reduced = BoxCover::trusted(cover.ambient(), std::move(kept));
    }
    const auto reduced_axes = split_axes(reduced);
    out.upper = std::min(order, reduced_axes.essential.size() + 1);
    if (reduced_axes.essential.size() <= 3) {
        if (auto pattern = fitting_bricks(reduced, reduced_axes.essential, 256)) {
            out.upper = std::min(out.upper, brick_order(*pattern, cover.ambient().dimension()));
            out.brick_certified = true;
        }
    }
    out.upper = std::max(out.upper, out.lower);
    return out;
}

DBounds d_bounds_join(const std::vector<BoxCover>& factors) {
    if (factors.empty()) throw DomainError("join of no covers");
    std::set<CoordLabel> free;
    std::set<CoordLabel> essential;
    bool all_whole = true;
    BigInt order_product = 1;
    for (const auto& f : factors) {
        if (f.ambient().level != factors.front().ambient().level) throw DomainError("covers live on different levels");
        const auto axes = split_axes(f);
        all_whole = all_whole && axes.has_whole;
        for (auto d : axes.free) free.insert(f.ambient().coords[d]);
        for (auto d : axes.essential) essential.insert(f.ambient().coords[d]);
        if (order_product <= BigInt(1u << 20)) order_product *= static_cast<unsigned long>(ord(f));
    }
    DBounds out;
    out.spanning_free = free.size();
    out.essential = essential.size();
    if (all_whole) return out;
    out.lower = std::max<std::size_t>(2, free.size() + 1);
    out.weak = free.empty();
    out.upper = essential.size() + 1;
    if (order_product < BigInt(static_cast<unsigned long>(out.upper))) out.upper = order_product.get_ui();
    out.upper = std::max(out.upper, out.lower);
    return out;
}

MdimEstimate mdim_upper_estimate(const Tower& tower, const std::vector<BoxCover>& covers,
                                 const std::vector<long>& n_list, std::size_t cap) {
    require_valid(tower);
    if (!tower.is_cube()) throw DomainError("weighted joins are built on cube towers");
    if (covers.size() != tower.depth()) throw DomainError("one cover per level required");
    if (n_list.empty()) throw DomainError("empty n list");
    MdimEstimate out;
    for (long n : n_list) {
        const auto windows = tower.windows(n);
        std::vector<BoxCover> factors;
        std::set<CoordLabel> axes;
        for (std::size_t level = 0; level < windows.size(); ++level)
            for (long j = 0; j < windows[level]; ++j) {
                factors.push_back(pullback_shift(covers[level], tower, level, j));
                for (const auto& c : factors.back().ambient().coords) axes.insert(c);
            }
        if (axes.size() > cap)
            throw DomainError("weighted join at n=" + std::to_string(n) + " has " + std::to_string(axes.size()) +
                              " axes, above the cap " + std::to_string(cap));
        MdimRow row;
        row.n = n;
        row.dimension = axes.size();
        row.bounds = d_bounds_join(factors);
        row.ratio = static_cast<double>(row.bounds.upper) / static_cast<double>(n);
        out.rows.push_back(row);
    }
    out.last = out.rows.back().ratio;
    std::set<long> distinct(n_list.begin(), n_list.end());
    if (distinct.size() >= 2) {
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& r : out.rows) {
            x.push_back(1.0 / static_cast<double>(r.n));
            y.push_back(r.ratio);
        }
        out.trend = least_squares(x, y).intercept;
    } else {
        out.trend = out.last;
    }
    return out;
}

}  // namespace wmd
