#include "wmd/example51.hpp"

#include "wmd/error.hpp"

#include <sstream>

namespace wmd {

Tower two_level_cube_tower(const Rational& a1, const Rational& a2) {
    return Tower({CubeSystem{2, 0}, CubeSystem{1, 0}}, {ForgetfulFactor::project(1)}, WeightVector({a1, a2}));
}

BenchmarkOptions::BenchmarkOptions() {
    for (long k = 2; k <= 6; ++k) faithful_eps.push_back(pow2(-k));
    for (long k = 4; k <= 9; ++k) audit_eps.push_back(pow2(-k));
}

namespace {

FaithfulLine line_of(const CubeCover& c, long formula) {
    return FaithfulLine{c.n, c.eps, c.pad, c.base, c.exponent, formula, c.certified};
}

std::string yes(bool b) { return b ? "yes" : "no"; }

std::string interval(const DistanceInterval& d) { return "[" + to_string(d.lo) + "," + to_string(d.hi) + "]"; }

std::string describe_point(const PointWindow& p) {
    std::string out;
    for (long m = -p.radius(); m <= p.radius(); ++m)
        for (int c = 0; c < p.components(); ++c)
            if (p.value(m, c) != 0) out += (out.empty() ? "" : ";") + std::string("x(") + std::to_string(m) + "," +
                                           std::to_string(c) + ")=" + to_string(p.value(m, c));
    return out.empty() ? "0" : out;
}

}  // namespace

BenchmarkReport run_cube_benchmark(const BenchmarkOptions& options) {
    const Tower tower = two_level_cube_tower();
    BenchmarkReport r;
    std::uint64_t seed = options.seed;
    for (long n : options.faithful_n)
        for (const auto& eps : options.faithful_eps) {
            const auto f = cube_cover_count(tower, n, eps, CoverMode::Faithful, seed++);
            r.faithful.push_back(line_of(f, 4 * n + 4 * f.pad + 2));
            const auto t = cube_cover_count(tower, n, eps, CoverMode::Tight, seed++);
            r.tight.push_back(line_of(t, 3 * n + 4 * t.pad + 2));
        }
    for (long n : options.audit_n)
        for (const auto& eps : options.audit_eps) r.packing.push_back(cube_packing_grid(tower, n, eps));

    // The claimed family is checked against its own claim, distance >= eps.
    r.claimed = claimed_grid_family(tower, options.counterexample_n, options.counterexample_eps);
    r.audit = verify_grid_family(tower, options.counterexample_n, r.claimed, options.counterexample_eps, false);
    if (!r.audit.ok)
        r.pair_audit = verify_separated({r.audit.x, r.audit.y}, tower, options.counterexample_n,
                                        options.counterexample_eps, false);

    r.faithful_slopes = mmdim_estimate(tower, options.faithful_eps, options.faithful_n, SMode::Faithful, options.seed);
    r.audited_slopes = mmdim_estimate(tower, options.audit_eps, options.audit_n, SMode::Tight, options.seed);
    return r;
}

std::string render_benchmark(const BenchmarkReport& r, const BenchmarkOptions& options) {
    std::ostringstream os;
    os << "# two-level cube tower ([0,1]^2)^Z -> [0,1]^Z, first component kept, a=(1,1)\n";
    os << "# components are 0-based; log values are natural logs\n";
    os << "\n[faithful cover]\n";
    for (const auto& f : r.faithful)
        os << "n=" << f.n << ",eps=" << to_string(f.eps) << ",exponent=" << f.exponent << ",l=" << f.pad
           << ",base=" << f.base.get_str() << ",formula_exponent=" << f.formula_exponent
           << ",match=" << yes(f.exponent == f.formula_exponent) << ",certified=" << yes(f.certified) << "\n";
    os << "\n[tight cover]\n";
    for (const auto& t : r.tight)
        os << "n=" << t.n << ",eps=" << to_string(t.eps) << ",exponent=" << t.exponent << ",l=" << t.pad
           << ",base=" << t.base.get_str() << ",expected_exponent=" << t.formula_exponent
           << ",match=" << yes(t.exponent == t.formula_exponent) << ",certified=" << yes(t.certified) << "\n";
    os << "\n[packing grid]\n";
    std::size_t k = 0;
    for (long n : options.audit_n)
        for (const auto& eps : options.audit_eps) {
            const auto& p = r.packing[k++];
            os << "n=" << n << ",eps=" << to_string(eps) << ",coordinates=" << p.family.coords.size()
               << ",spacing=" << to_string(p.family.spacing) << ",values=" << p.family.values
               << ",certified=" << yes(p.certified) << "\n";
        }
    os << "\n[separation audit]\n";
    os << "family: all components on [0," << (r.claimed.coords.empty() ? 0 : r.claimed.coords.back().m + 1)
       << "), spacing=" << to_string(r.claimed.spacing) << ", values=" << r.claimed.values
       << ", n=" << options.counterexample_n << ", eps=" << to_string(options.counterexample_eps) << "\n";
    if (r.audit.ok) {
        os << "result: separated (no counterexample)\n";
    } else {
        os << "result: counterexample\n";
        os << "coordinate: m=" << r.audit.coord.m << ",c=" << r.audit.coord.c << "\n";
        os << "x: " << describe_point(r.audit.x) << "\n";
        os << "y: " << describe_point(r.audit.y) << "\n";
        os << "distance: " << interval(r.audit.distance) << " (decimal " << to_decimal(r.audit.distance.hi)
           << "), entirely below eps: " << yes(r.audit.distance.hi < options.counterexample_eps) << "\n";
        os << "pairwise check: separated=" << yes(r.pair_audit.ok) << ",distance=" << interval(r.pair_audit.distance)
           << "\n";
    }
    os << "\n[slopes]\n";
    os << "faithful_upper_slope=" << to_decimal(r.faithful_slopes.slope_upper_data, 6)
       << " (covers only; eps 2^-2..2^-6 by default)\n";
    os << "tight_upper_slope=" << to_decimal(r.audited_slopes.slope_upper_data, 6) << "\n";
    os << "packing_lower_slope=" << to_decimal(r.audited_slopes.slope_lower_data, 6) << "\n";
    os << "bracket_crossed=" << yes(r.audited_slopes.crossed) << "\n";
    os << "\n[discrepancy]\n";
    os << "claimed_value=" << to_decimal(r.claimed_value, 6) << " (faithful cover exponent 4n+4l+2)\n";
    os << "audited_bracket=[" << to_decimal(r.audited_slopes.slope_lo, 6) << ","
       << to_decimal(r.audited_slopes.slope_hi, 6) << "]\n";
    os << "note: the faithful cover constrains component 1 on [n,2n), where d_n^a weighs it below 1; "
          "the separated family used for the lower bound is not separated there\n";
    return os.str();
}

}  // namespace wmd
