#include "wmd/wmetric.hpp"

#include "wmd/error.hpp"

#include <algorithm>

namespace wmd {

// ---------------------------------------------------------------------------
// PointWindow

PointWindow PointWindow::symbolic(long radius, std::vector<int> symbols, Tail tail) {
    if (radius < 0) throw DomainError("point radius must be nonnegative");
    if (symbols.size() != static_cast<std::size_t>(2 * radius + 1))
        throw DomainError("symbolic point needs 2W+1 symbols");
    for (int s : symbols)
        if (s < 0) throw DomainError("negative symbol in point");
    PointWindow p;
    p.cube_ = false;
    p.radius_ = radius;
    p.tail_ = tail;
    p.symbols_ = std::move(symbols);
    return p;
}

PointWindow PointWindow::cube(long radius, std::vector<std::vector<Rational>> values, Tail tail) {
    if (radius < 0) throw DomainError("point radius must be nonnegative");
    if (values.size() != static_cast<std::size_t>(2 * radius + 1))
        throw DomainError("cube point needs 2W+1 coordinate entries");
    if (values.empty() || values[0].empty()) throw DomainError("cube point needs at least one component");
    PointWindow p;
    p.cube_ = true;
    p.radius_ = radius;
    p.tail_ = tail;
    p.components_ = static_cast<int>(values[0].size());
    for (const auto& row : values) {
        if (row.size() != values[0].size()) throw DomainError("cube point rows differ in component count");
        for (const auto& v : row) {
            if (v < 0 || v > 1) throw DomainError("cube value " + to_string(v) + " outside [0,1]");
            p.values_.push_back(v);
        }
    }
    return p;
}

PointWindow PointWindow::zero_cube(int components, long radius, Tail tail) {
    return cube(radius, std::vector<std::vector<Rational>>(static_cast<std::size_t>(2 * radius + 1),
                                                           std::vector<Rational>(static_cast<std::size_t>(components))),
                tail);
}

int PointWindow::symbol(long m) const {
    if (m < -radius_ || m > radius_) return 0;
    return symbols_[static_cast<std::size_t>(m + radius_)];
}

const Rational& PointWindow::value(long m, int c) const {
    static const Rational zero(0);
    if (m < -radius_ || m > radius_) return zero;
    return values_[static_cast<std::size_t>((m + radius_) * components_ + c)];
}

PointWindow PointWindow::with_value(long m, int c, const Rational& v) const {
    if (!cube_) throw DomainError("with_value on a symbolic point");
    if (c < 0 || c >= components_) throw DomainError("component index out of range");
    long radius = std::max(radius_, m < 0 ? -m : m);
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(2 * radius + 1),
                                            std::vector<Rational>(static_cast<std::size_t>(components_)));
    for (long p = -radius_; p <= radius_; ++p)
        for (int k = 0; k < components_; ++k) rows[static_cast<std::size_t>(p + radius)][static_cast<std::size_t>(k)] = value(p, k);
    rows[static_cast<std::size_t>(m + radius)][static_cast<std::size_t>(c)] = v;
    return cube(radius, std::move(rows), tail_);
}

PointWindow PointWindow::with_symbol(long m, int s) const {
    if (cube_) throw DomainError("with_symbol on a cube point");
    long radius = std::max(radius_, m < 0 ? -m : m);
    std::vector<int> symbols(static_cast<std::size_t>(2 * radius + 1), 0);
    for (long p = -radius_; p <= radius_; ++p) symbols[static_cast<std::size_t>(p + radius)] = symbol(p);
    symbols[static_cast<std::size_t>(m + radius)] = s;
    return symbolic(radius, std::move(symbols), tail_);
}

// ---------------------------------------------------------------------------

void check_point(const Tower& tower, const PointWindow& x) {
    require_valid(tower);
    if (tower.is_cube()) {
        if (!x.is_cube()) throw DomainError("symbolic point given for a cube tower");
        if (tower.cube(0).period != 0) throw DomainError("distances on periodic cube levels are not supported");
        if (x.components() != tower.cube(0).components)
            throw DomainError("point has " + std::to_string(x.components()) + " components, level 1 has " +
                              std::to_string(tower.cube(0).components));
    } else {
        if (x.is_cube()) throw DomainError("cube point given for a symbolic tower");
        const int q = tower.symbolic(0).alphabet;
        for (long m = -x.radius(); m <= x.radius(); ++m)
            if (x.symbol(m) >= q) throw DomainError("symbol " + std::to_string(x.symbol(m)) + " outside alphabet");
    }
}

namespace {

// Weighted two-sided sums S(j) = sum_p 2^-|p-j| v(p) over p in [p0, p0 + v.size()),
// evaluated for j in [0, count). Uses the running recurrences of the geometric kernel.
std::vector<Rational> kernel_sums(const std::vector<Rational>& v, long p0, long count) {
    const long size = static_cast<long>(v.size());
    std::vector<Rational> left(v.size());
    std::vector<Rational> right(v.size());
    const Rational half(1, 2);
    for (long k = 0; k < size; ++k) {
        left[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(k)];
        if (k > 0) left[static_cast<std::size_t>(k)] += left[static_cast<std::size_t>(k - 1)] * half;
    }
    for (long k = size - 1; k >= 0; --k) {
        if (k + 1 < size)
            right[static_cast<std::size_t>(k)] =
                (v[static_cast<std::size_t>(k + 1)] + right[static_cast<std::size_t>(k + 1)]) * half;
    }
    std::vector<Rational> out(static_cast<std::size_t>(count));
    for (long j = 0; j < count; ++j) {
        const auto k = static_cast<std::size_t>(j - p0);
        out[static_cast<std::size_t>(j)] = left[k] + right[k];
    }
    return out;
}

Rational abs_diff(const Rational& a, const Rational& b) { return a >= b ? Rational(a - b) : Rational(b - a); }

DistanceInterval cube_distance(const Tower& tower, const PointWindow& x, const PointWindow& y, long n) {
    const auto windows = tower.windows(n);
    const long lmax = windows.back();
    const long r = std::max(x.radius(), y.radius());
    const long p0 = std::min(-r, 0L);
    const long p1 = std::max(r, lmax - 1);
    const bool uncertain_tail = x.tail() == Tail::Unknown || y.tail() == Tail::Unknown;
    const auto span = static_cast<std::size_t>(p1 - p0 + 1);

    DistanceInterval best{Rational(0), Rational(0)};
    for (std::size_t level = 0; level < windows.size(); ++level) {
        const int visible = tower.visible_components(level);
        std::vector<Rational> lo(span);
        std::vector<Rational> hi(span);
        for (long p = p0; p <= p1; ++p) {
            const auto k = static_cast<std::size_t>(p - p0);
            const bool kx = x.known(p);
            const bool ky = y.known(p);
            if (kx && ky) {
                Rational d(0);
                for (int c = 0; c < visible; ++c) d = std::max(d, abs_diff(x.value(p, c), y.value(p, c)));
                lo[k] = d;
                hi[k] = d;
            } else if (kx || ky) {
                const PointWindow& known = kx ? x : y;
                Rational u(0);
                for (int c = 0; c < visible; ++c) {
                    const Rational& v = known.value(p, c);
                    u = std::max(u, std::max(v, Rational(1 - v)));
                }
                hi[k] = u;
            } else {
                hi[k] = 1;
            }
        }
        const long count = windows[level];
        auto lo_sums = kernel_sums(lo, p0, count);
        auto hi_sums = kernel_sums(hi, p0, count);
        for (long j = 0; j < count; ++j) {
            Rational h = hi_sums[static_cast<std::size_t>(j)];
            if (uncertain_tail) h += pow2(-(p1 - j)) + pow2(-(j - p0));
            best.lo = std::max(best.lo, lo_sums[static_cast<std::size_t>(j)]);
            best.hi = std::max(best.hi, h);
        }
    }
    return best;
}

DistanceInterval symbolic_distance(const Tower& tower, const PointWindow& x, const PointWindow& y, long n) {
    const auto windows = tower.windows(n);
    const long reach = std::max(x.radius(), y.radius()) + windows.back() + 1;
    DistanceInterval best{Rational(0), Rational(0)};
    for (std::size_t level = 0; level < windows.size(); ++level) {
        if (tower.symbolic(level).alphabet == 1) continue;
        const auto map = tower.chain_symbol_map(level);
        auto image = [&](const PointWindow& pt, long p) { return map[static_cast<std::size_t>(pt.symbol(p))]; };
        for (long j = 0; j < windows[level]; ++j) {
            long first_diff = -1;
            long first_unknown = -1;
            for (long r = 0; r <= reach && first_diff < 0; ++r) {
                for (long p : {j - r, j + r}) {
                    if (x.known(p) && y.known(p)) {
                        if (image(x, p) != image(y, p) && first_diff < 0) first_diff = r;
                    } else if (first_unknown < 0) {
                        first_unknown = r;
                    }
                }
            }
            if (first_unknown < 0 && first_diff < 0) continue;
            long hi_r = first_diff < 0 ? first_unknown
                                       : (first_unknown < 0 ? first_diff : std::min(first_diff, first_unknown));
            Rational lo = first_diff < 0 ? Rational(0) : pow2(-first_diff);
            best.lo = std::max(best.lo, lo);
            best.hi = std::max(best.hi, pow2(-hi_r));
        }
    }
    return best;
}

}  // namespace

DistanceInterval bowen_distance(const Tower& tower, const PointWindow& x, const PointWindow& y, long n) {
    check_point(tower, x);
    check_point(tower, y);
    if (n < 1) throw DomainError("n must be positive");
    return tower.is_cube() ? cube_distance(tower, x, y, n) : symbolic_distance(tower, x, y, n);
}

Membership classify_below(const DistanceInterval& d, const Rational& eps) {
    if (d.hi < eps) return Membership::Inside;
    if (d.lo >= eps) return Membership::Outside;
    return Membership::Unresolved;
}

Membership bowen_ball_membership(const Tower& tower, const PointWindow& center, const PointWindow& y, long n,
                                 const Rational& eps) {
    if (eps <= 0) throw DomainError("ball radius must be positive");
    return classify_below(bowen_distance(tower, center, y, n), eps);
}

long component_window(const Tower& tower, long n, int component) {
    require_valid(tower);
    if (!tower.is_cube()) throw DomainError("precision profiles are defined for cube towers only");
    if (component < 0 || component >= tower.cube(0).components) throw DomainError("component index out of range");
    const auto windows = tower.windows(n);
    long best = 0;
    for (std::size_t i = 0; i < windows.size(); ++i)
        if (component < tower.visible_components(i)) best = std::max(best, windows[i]);
    return best;
}

namespace {
long dist_to_window(long m, long length) {
    if (m < 0) return -m;
    if (m >= length) return m - (length - 1);
    return 0;
}
}  // namespace

Rational profile_weight(const Tower& tower, long n, const CoordLabel& coord) {
    return pow2(-dist_to_window(coord.m, component_window(tower, n, coord.c)));
}

PrecisionProfile precision_profile(const Tower& tower, long n, const Rational& eps) {
    if (eps <= 0) throw DomainError("profile threshold must be positive");
    PrecisionProfile out;
    if (eps > 1) {
        component_window(tower, n, 0);  // still validates the tower kind
        return out;
    }
    long reach = 0;
    while (pow2(-(reach + 1)) >= eps) ++reach;
    const int components = tower.cube(0).components;
    for (int c = 0; c < components; ++c) {
        const long length = component_window(tower, n, c);
        for (long m = -reach; m <= length - 1 + reach; ++m)
            out.emplace(CoordLabel{m, c}, pow2(-dist_to_window(m, length)));
    }
    return out;
}

Rational cylinder_diameter(const Tower& tower, long n, const std::map<CoordLabel, Rational>& sides) {
    require_valid(tower);
    if (!tower.is_cube()) throw DomainError("cylinder diameters are defined for cube towers only");
    const auto windows = tower.windows(n);
    long p0 = 0;
    long p1 = windows.back() - 1;
    for (const auto& [coord, side] : sides) {
        p0 = std::min(p0, coord.m);
        p1 = std::max(p1, coord.m);
    }
    const auto span = static_cast<std::size_t>(p1 - p0 + 1);
    Rational best(0);
    for (std::size_t level = 0; level < windows.size(); ++level) {
        const int visible = tower.visible_components(level);
        std::vector<Rational> side(span);
        for (long p = p0; p <= p1; ++p) {
            Rational s(0);
            for (int c = 0; c < visible; ++c) {
                auto it = sides.find(CoordLabel{p, c});
                s = std::max(s, it == sides.end() ? Rational(1) : it->second);
            }
            side[static_cast<std::size_t>(p - p0)] = s;
        }
        auto sums = kernel_sums(side, p0, windows[level]);
        for (long j = 0; j < windows[level]; ++j) {
            Rational total = sums[static_cast<std::size_t>(j)] + pow2(-(p1 - j)) + pow2(-(j - p0));
            best = std::max(best, total);
        }
    }
    return best;
}

}  // namespace wmd
