#include "wmd/counting.hpp"

#include "wmd/error.hpp"

#include <algorithm>
#include <random>

namespace wmd {

namespace {

const CubeSystem& require_cube(const Tower& tower) {
    require_valid(tower);
    if (!tower.is_cube()) throw DomainError("cube tower required");
    const auto& base = tower.cube(0);
    if (base.period != 0) throw DomainError("periodic cube levels have no grid constructions");
    return base;
}

// Largest l >= 0 with 2^l <= 4/eps.
long padding(const Rational& eps) {
    const Rational limit = Rational(4) / eps;
    long l = 0;
    while (pow2(l + 1) <= limit) ++l;
    return l;
}

// Smallest t with 2^t >= x (x > 0).
long ceil_log2(const Rational& x) {
    long t = 0;
    while (pow2(t) < x) ++t;
    while (pow2(t - 1) >= x) --t;
    return t;
}

// Uniform dyadic point of the open interval (lo, hi).
Rational sample_open(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
    constexpr unsigned long grain = 1ul << 20;
    std::uniform_int_distribution<unsigned long> pick(1, grain - 1);
    return lo + (hi - lo) * Rational(pick(rng), grain);
}

}  // namespace

CubeCover cube_cover_count(const Tower& tower, long n, const Rational& eps, CoverMode mode, std::uint64_t seed,
                           std::size_t samples) {
    const auto& base_level = require_cube(tower);
    if (eps <= 0 || eps > 12) throw DomainError("cover resolution eps must lie in (0, 12], got " + to_string(eps));
    CubeCover out;
    out.mode = mode;
    out.n = n;
    out.eps = eps;
    out.pad = padding(eps);
    const BigInt last = floor_of(Rational(12) / eps);
    out.base = last + 1;

    const auto windows = tower.windows(n);
    const int components = base_level.components;
    for (int c = 0; c < components; ++c) {
        const long length = mode == CoverMode::Faithful ? windows.back() : component_window(tower, n, c);
        for (long m = -out.pad; m <= length + out.pad; ++m) out.coords.push_back(CoordLabel{m, c});
    }
    std::sort(out.coords.begin(), out.coords.end());
    out.exponent = static_cast<long>(out.coords.size());
    out.count = CountBounds::between(1, pow(out.base, static_cast<unsigned long>(out.exponent)));

    const Rational step = eps / 12;
    const Rational side = std::min(Rational(eps / 6), Rational(1));
    std::map<CoordLabel, Rational> sides;
    for (const auto& c : out.coords) sides.emplace(c, side);
    out.cell_diameter = cylinder_diameter(tower, n, sides);

    // Random pairs drawn from random cells, with everything outside the support left open.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned long> cell(0, to_long(last) < 0 ? 0ul : static_cast<unsigned long>(to_long(last)));
    const long radius = windows.back() + out.pad;
    bool inside = out.cell_diameter < eps;
    for (std::size_t s = 0; s < samples && inside; ++s) {
        std::vector<std::vector<Rational>> xs(static_cast<std::size_t>(2 * radius + 1),
                                              std::vector<Rational>(static_cast<std::size_t>(components)));
        auto ys = xs;
        for (long m = -radius; m <= radius; ++m)
            for (int c = 0; c < components; ++c) {
                auto& x = xs[static_cast<std::size_t>(m + radius)][static_cast<std::size_t>(c)];
                auto& y = ys[static_cast<std::size_t>(m + radius)][static_cast<std::size_t>(c)];
                if (sides.count(CoordLabel{m, c})) {
                    const auto k = static_cast<long>(cell(rng));
                    const Rational lo = std::max(Rational(step * (k - 1)), Rational(0));
                    const Rational hi = std::min(Rational(step * (k + 1)), Rational(1));
                    x = sample_open(rng, lo, hi);
                    y = sample_open(rng, lo, hi);
                } else {
                    x = sample_open(rng, 0, 1);
                    y = sample_open(rng, 0, 1);
                }
            }
        const auto d = bowen_distance(tower, PointWindow::cube(radius, std::move(xs), Tail::Unknown),
                                      PointWindow::cube(radius, std::move(ys), Tail::Unknown), n);
        inside = d.hi < eps;
        ++out.samples;
    }
    out.certified = inside;
    return out;
}

// ---------------------------------------------------------------------------

BigInt GridFamily::size() const { return pow(BigInt(values), static_cast<unsigned long>(coords.size())); }

namespace {
long support_radius(const std::vector<CoordLabel>& coords) {
    long radius = 0;
    for (const auto& c : coords) radius = std::max(radius, c.m < 0 ? -c.m : c.m);
    return radius;
}
}  // namespace

PointWindow GridFamily::point(const BigInt& index) const {
    if (index < 0 || index >= size()) throw DomainError("grid index out of range");
    const long radius = support_radius(coords);
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(2 * radius + 1),
                                            std::vector<Rational>(static_cast<std::size_t>(components)));
    BigInt rest = index;
    for (const auto& c : coords) {
        BigInt digit = rest % values;
        rest /= values;
        rows[static_cast<std::size_t>(c.m + radius)][static_cast<std::size_t>(c.c)] = spacing * Rational(digit);
    }
    return PointWindow::cube(radius, std::move(rows));
}

std::vector<PointWindow> GridFamily::materialize(std::size_t limit) const {
    const BigInt total = size();
    if (total > BigInt(static_cast<unsigned long>(limit)))
        throw DomainError("grid family has " + to_string(total) + " members, above the limit " + std::to_string(limit));
    std::vector<PointWindow> out;
    for (unsigned long i = 0; i < total.get_ui(); ++i) out.push_back(point(BigInt(i)));
    return out;
}

GridAudit verify_grid_family(const Tower& tower, long n, const GridFamily& family, const Rational& eps, bool strict) {
    const auto& base = require_cube(tower);
    if (eps <= 0) throw DomainError("eps must be positive");
    if (family.components != base.components) throw DomainError("grid family component count differs from the tower");
    GridAudit audit;
    if (family.values < 2) return audit;
    auto coords = family.coords;
    std::sort(coords.begin(), coords.end());
    const auto zero = PointWindow::zero_cube(family.components, support_radius(coords));
    for (const auto& c : coords) {
        const auto moved = zero.with_value(c.m, c.c, family.spacing);
        const auto d = bowen_distance(tower, zero, moved, n);
        if (strict ? d.lo > eps : d.lo >= eps) continue;
        if (!(strict ? d.hi <= eps : d.hi < eps))
            throw UnresolvedComparison("grid separation undecided at coordinate (" + std::to_string(c.m) + "," +
                                       std::to_string(c.c) + ")");
        audit.ok = false;
        audit.coord = c;
        audit.x = zero;
        audit.y = moved;
        audit.distance = d;
        return audit;
    }
    return audit;
}

PackingGrid cube_packing_grid(const Tower& tower, long n, const Rational& eps) {
    const auto& base = require_cube(tower);
    if (eps <= 0) throw DomainError("eps must be positive");
    PackingGrid out;
    out.family.components = base.components;
    for (int c = 0; c < base.components; ++c) {
        const long length = component_window(tower, n, c);
        for (long m = 0; m < length; ++m) out.family.coords.push_back(CoordLabel{m, c});
    }
    std::sort(out.family.coords.begin(), out.family.coords.end());
    const long r = std::max(0L, ceil_log2(Rational(1) / eps)) + 10;
    const Rational unit = pow2(-r);
    out.family.spacing = Rational(floor_of(eps / unit) + 1) * unit;
    out.family.values = std::max(1L, to_long(floor_of(Rational(1) / out.family.spacing)));
    const BigInt size = out.family.size();
    out.count = CountBounds::of_exact(size);
    out.count.exact.reset();  // cardinality of this family, a lower bound on the separated number
    out.certified = verify_grid_family(tower, n, out.family, eps, true).ok;
    return out;
}

GridFamily claimed_grid_family(const Tower& tower, long n, const Rational& eps) {
    const auto& base = require_cube(tower);
    if (eps <= 0 || eps > 1) throw DomainError("grid spacing must lie in (0, 1]");
    GridFamily family;
    family.components = base.components;
    const long length = tower.windows(n).back();
    for (long m = 0; m < length; ++m)
        for (int c = 0; c < base.components; ++c) family.coords.push_back(CoordLabel{m, c});
    family.spacing = eps;
    family.values = 1 + to_long(floor_of(Rational(1) / eps));
    return family;
}

}  // namespace wmd
