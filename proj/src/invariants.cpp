#include "wmd/invariants.hpp"

#include "wmd/error.hpp"
#include "wmd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace wmd {

namespace {

// Intercept of value against 1/n; the single value when only one n is given.
double extrapolate(const std::vector<long>& ns, const std::vector<double>& values) {
    std::set<long> distinct(ns.begin(), ns.end());
    if (distinct.size() < 2) return values.back();
    std::vector<double> x;
    for (long n : ns) x.push_back(1.0 / static_cast<double>(n));
    return least_squares(x, values).intercept;
}

void check_n_list(const std::vector<long>& n_list) {
    if (n_list.empty()) throw DomainError("empty n list");
    for (long n : n_list)
        if (n < 1) throw DomainError("n values must be positive");
}

// Margin l with eps in (2^-(l+1), 2^-l]; cylinders of radius l have diameter < eps.
long symbolic_margin(const Rational& eps) {
    long l = 0;
    while (pow2(-(l + 1)) >= eps) ++l;
    return l;
}

LogValue log_power(const BigInt& base, long exponent) { return LogValue::scaled_log(Rational(exponent), base); }

LogValue entropy_bound(const Tower& tower) {
    LogValue out;
    for (std::size_t i = 0; i < tower.depth(); ++i)
        out = out + LogValue::scaled_log(tower.weights()[i], BigInt(tower.symbolic(i).alphabet));
    return out;
}

bool all_full(const Tower& tower) {
    for (std::size_t i = 0; i < tower.depth(); ++i)
        if (!tower.symbolic(i).is_full()) return false;
    return true;
}

struct CubeUpper {
    LogValue log_count;
    bool certified = false;
    std::string source;
};

CubeUpper cube_upper(const Tower& tower, long n, const Rational& eps, SMode mode, std::uint64_t seed) {
    CubeUpper best;
    bool have = false;
    for (CoverMode m : {CoverMode::Faithful, CoverMode::Tight}) {
        if (mode == SMode::Faithful && m != CoverMode::Faithful) continue;
        if (mode == SMode::Tight && m != CoverMode::Tight) continue;
        const auto cover = cube_cover_count(tower, n, eps, m, seed);
        LogValue value = log_power(cover.base, cover.exponent);
        if (!have || value < best.log_count) {
            best = CubeUpper{value, cover.certified, m == CoverMode::Faithful ? "faithful" : "tight"};
            have = true;
        }
    }
    return best;
}

}  // namespace

SEstimate s_epsilon_estimate(const Tower& tower, const Rational& eps, const std::vector<long>& n_list, SMode mode,
                             std::uint64_t seed) {
    check_n_list(n_list);
    require_valid(tower);
    if (eps <= 0) throw DomainError("eps must be positive");
    SEstimate out;
    out.eps = eps;
    out.rows.resize(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t k) {
        SRow row;
        row.n = n_list[k];
        if (tower.is_symbolic()) {
            row.source = "itinerary";
            row.log_count = eps > 1 ? LogValue() : itinerary_count(tower, row.n, symbolic_margin(eps)).log_upper();
        } else {
            auto best = cube_upper(tower, row.n, eps, mode, seed + k);
            row.log_count = best.log_count;
            row.certified = best.certified;
            row.source = best.source;
        }
        row.value = row.log_count * Rational(1, row.n);
        out.rows[k] = std::move(row);
    });
    std::vector<double> values;
    for (const auto& r : out.rows) values.push_back(r.value.to_double());
    out.extrapolated = extrapolate(n_list, values);
    auto last = std::max_element(out.rows.begin(), out.rows.end(), [](const SRow& a, const SRow& b) { return a.n < b.n; });
    out.largest_n = last->value.to_double();
    return out;
}

EntropyEstimate entropy_estimate(const Tower& tower, const std::vector<long>& n_list) {
    check_n_list(n_list);
    require_valid(tower);
    if (!tower.is_symbolic()) throw DomainError("entropy estimates need a symbolic tower");
    EntropyEstimate out;
    out.rows.resize(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t k) {
        EntropyRow row;
        row.n = n_list[k];
        row.windows = tower.windows(row.n);
        row.count = *itinerary_count(tower, row.n).exact;
        row.value = LogValue::log(row.count) * Rational(1, row.n);
        out.rows[k] = std::move(row);
    });
    for (std::size_t k = 1; k < out.rows.size(); ++k) out.rows[k].cauchy_gap = (out.rows[k].value - out.rows[k - 1].value).abs();
    out.extrapolated = out.rows.back().value;
    out.upper_bound = entropy_bound(tower);
    if (all_full(tower)) {
        out.closed_form = out.upper_bound;
        out.closed_form_gap = (out.extrapolated - *out.closed_form).abs();
    }
    return out;
}

MmdimReport mmdim_estimate(const Tower& tower, const std::vector<Rational>& eps_list, const std::vector<long>& n_list,
                           SMode mode, std::uint64_t seed) {
    check_n_list(n_list);
    require_valid(tower);
    if (eps_list.size() < 4) throw DomainError("the eps grid needs at least four values");
    for (const auto& e : eps_list)
        if (e <= 0 || !is_dyadic(e)) throw DomainError("eps values must be positive dyadic rationals, got " + to_string(e));
    if (std::set<Rational>(eps_list.begin(), eps_list.end()).size() < 2)
        throw DomainError("degenerate regression: all eps values are equal");

    MmdimReport out;
    out.symbolic = tower.is_symbolic();
    out.mode = out.symbolic ? "itinerary" : (mode == SMode::Faithful ? "faithful" : mode == SMode::Tight ? "tight" : "best");
    const std::size_t ne = eps_list.size();
    out.cells.resize(n_list.size() * ne);
    parallel_for(out.cells.size(), [&](std::size_t k) {
        MmdimCell cell;
        cell.n = n_list[k / ne];
        cell.eps = eps_list[k % ne];
        if (out.symbolic) {
            // Distinct cylinders of radius l - 1 are at distance >= 2^-(l-1) > eps.
            const long l = cell.eps > 1 ? -1 : symbolic_margin(cell.eps);
            cell.log_upper = l < 0 ? LogValue() : itinerary_count(tower, cell.n, l).log_upper();
            cell.log_lower = l < 1 ? LogValue() : itinerary_count(tower, cell.n, l - 1).log_lower();
            cell.lower_certified = cell.upper_certified = true;
        } else {
            auto upper = cube_upper(tower, cell.n, cell.eps, mode, seed + k);
            const auto packing = cube_packing_grid(tower, cell.n, cell.eps);
            cell.log_upper = upper.log_count;
            cell.upper_certified = upper.certified;
            cell.log_lower = log_power(BigInt(packing.family.values), static_cast<long>(packing.family.coords.size()));
            cell.lower_certified = packing.certified;
        }
        out.cells[k] = std::move(cell);
    });

    std::vector<double> x;
    std::vector<double> upper;
    std::vector<double> lower;
    const long n_max = *std::max_element(n_list.begin(), n_list.end());
    for (std::size_t e = 0; e < ne; ++e) {
        std::vector<double> up;
        std::vector<double> lo;
        MmdimSummary s;
        s.eps = eps_list[e];
        for (std::size_t i = 0; i < n_list.size(); ++i) {
            const auto& cell = out.cells[i * ne + e];
            const double inv = 1.0 / static_cast<double>(cell.n);
            up.push_back(cell.log_upper.to_double() * inv);
            lo.push_back(cell.log_lower.to_double() * inv);
            if (cell.n == n_max) {
                s.s_upper_largest_n = up.back();
                s.s_lower_largest_n = lo.back();
            }
            out.all_certified = out.all_certified && cell.lower_certified && cell.upper_certified;
        }
        s.s_upper = extrapolate(n_list, up);
        s.s_lower = extrapolate(n_list, lo);
        out.summary.push_back(s);
        x.push_back(-std::log(eps_list[e].get_d()));
        upper.push_back(s.s_upper);
        lower.push_back(s.s_lower);
    }
    const auto fit_hi = least_squares(x, upper);
    const auto fit_lo = least_squares(x, lower);
    out.slope_upper_data = fit_hi.slope;
    out.slope_lower_data = fit_lo.slope;
    out.residuals_hi = fit_hi.residuals;
    out.residuals_lo = fit_lo.residuals;
    if (out.symbolic) {
        out.entropy_bound = entropy_bound(tower);
        out.slope_lo = 0.0;
        out.slope_hi = 0.0;
    } else {
        out.crossed = fit_lo.slope > fit_hi.slope;
        out.slope_lo = std::min(fit_lo.slope, fit_hi.slope);
        out.slope_hi = std::max(fit_lo.slope, fit_hi.slope);
    }
    return out;
}

std::string mmdim_csv(const MmdimReport& report) {
    std::ostringstream os;
    os << "n,eps,eps_decimal,log_lower,log_lower_decimal,log_upper,log_upper_decimal,mode\n";
    for (const auto& c : report.cells)
        os << c.n << ',' << to_string(c.eps) << ',' << to_decimal(c.eps) << ',' << c.log_lower.to_string() << ','
           << to_decimal(c.log_lower.to_double()) << ',' << c.log_upper.to_string() << ','
           << to_decimal(c.log_upper.to_double()) << ',' << report.mode << '\n';
    os << "\neps,eps_decimal,S_upper,S_lower\n";
    for (const auto& s : report.summary)
        os << to_string(s.eps) << ',' << to_decimal(s.eps) << ',' << to_decimal(s.s_upper) << ','
           << to_decimal(s.s_lower) << '\n';
    os << "\nslope_lo,slope_hi\n" << to_decimal(report.slope_lo) << ',' << to_decimal(report.slope_hi) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> admissible_blocks(const SymbolicSystem& sys, long m) {
    std::vector<std::vector<int>> out;
    std::vector<int> word;
    std::function<void()> grow = [&]() {
        if (static_cast<long>(word.size()) == m) {
            out.push_back(word);
            return;
        }
        for (int a = 0; a < sys.alphabet; ++a) {
            if (!word.empty() && !sys.allowed(word.back(), a)) continue;
            word.push_back(a);
            grow();
            word.pop_back();
        }
    };
    grow();
    return out;
}

}  // namespace

Tower iterate_tower(const Tower& tower, long m) {
    require_valid(tower);
    if (!tower.is_symbolic()) throw DomainError("iterated towers are built for symbolic towers");
    if (m < 1) throw DomainError("the power m must be positive");
    constexpr std::size_t block_limit = 4096;
    std::vector<std::vector<std::vector<int>>> blocks;
    std::vector<System> levels;
    for (std::size_t i = 0; i < tower.depth(); ++i) {
        const auto& sys = tower.symbolic(i);
        if (std::pow(static_cast<double>(sys.alphabet), static_cast<double>(m)) > 1e7)
            throw DomainError("m-block recoding too large");
        blocks.push_back(admissible_blocks(sys, m));
        const auto& b = blocks.back();
        if (b.size() > block_limit) throw DomainError("m-block alphabet exceeds " + std::to_string(block_limit));
        std::vector<std::vector<std::uint8_t>> t(b.size(), std::vector<std::uint8_t>(b.size(), 0));
        for (std::size_t x = 0; x < b.size(); ++x)
            for (std::size_t y = 0; y < b.size(); ++y) t[x][y] = sys.allowed(b[x].back(), b[y].front()) ? 1 : 0;
        levels.emplace_back(SymbolicSystem::sft(std::move(t)));
    }
    std::vector<ForgetfulFactor> factors;
    for (std::size_t i = 0; i + 1 < tower.depth(); ++i) {
        const auto& map = tower.factors()[i].symbol_map;
        std::map<std::vector<int>, int> target;
        for (std::size_t y = 0; y < blocks[i + 1].size(); ++y) target.emplace(blocks[i + 1][y], static_cast<int>(y));
        std::vector<int> block_map;
        for (const auto& b : blocks[i]) {
            std::vector<int> image;
            for (int s : b) image.push_back(map[static_cast<std::size_t>(s)]);
            block_map.push_back(target.at(image));
        }
        factors.push_back(ForgetfulFactor::merge(std::move(block_map)));
    }
    return Tower(std::move(levels), std::move(factors), tower.weights());
}

PowerRuleReport power_rule_probe(const Tower& tower, long m, const std::vector<long>& n_list) {
    check_n_list(n_list);
    if (m < 1) throw DomainError("the power m must be positive");
    const Tower iterated = iterate_tower(tower, m);
    PowerRuleReport out;
    out.m = m;
    out.rows.resize(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t k) {
        const long n = n_list[k];
        PowerRow row;
        row.n = n;
        const BigInt iterated_count = *itinerary_count(iterated, n).exact;
        row.iterated = LogValue::log(iterated_count) * Rational(1, n);
        const LogValue e_n = LogValue::log(*itinerary_count(tower, n).exact) * Rational(1, n);
        const LogValue e_mn = LogValue::log(*itinerary_count(tower, m * n).exact) * Rational(1, m * n);
        row.scaled = e_n * Rational(m);
        row.deviation = (row.iterated - row.scaled).abs();
        row.gap = (e_mn - e_n).abs() * Rational(m);
        row.within_gap = row.deviation <= row.gap;
        auto windows = tower.windows(n);
        for (auto& w : windows) w *= m;
        row.recode_matches = *itinerary_count_windows(tower, windows).exact == iterated_count;
        out.rows[k] = std::move(row);
    });
    for (std::size_t k = 0; k < out.rows.size(); ++k) {
        if (k == 0 || out.max_deviation < out.rows[k].deviation) out.max_deviation = out.rows[k].deviation;
        if (k > 0 && out.rows[k - 1].gap < out.rows[k].gap) out.gaps_shrinking = false;
    }
    return out;
}

}  // namespace wmd
