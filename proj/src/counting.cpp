#include "wmd/counting.hpp"

#include "wmd/error.hpp"
#include "wmd/parallel.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace wmd {

CountBounds CountBounds::of_exact(const BigInt& value) {
    CountBounds out;
    out.lower = value;
    out.upper = value;
    out.exact = value;
    return out;
}

CountBounds CountBounds::between(const BigInt& lower, const BigInt& upper) {
    if (lower > upper) throw std::logic_error("count bounds out of order");
    if (lower == upper) return of_exact(lower);
    CountBounds out;
    out.lower = lower;
    out.upper = upper;
    return out;
}

// ---------------------------------------------------------------------------

FiniteMetricInstance FiniteMetricInstance::from_points(const Tower& tower, long n, std::vector<PointWindow> points) {
    FiniteMetricInstance inst;
    inst.size_ = points.size();
    inst.matrix_.assign(inst.size_ * inst.size_, DistanceInterval{Rational(0), Rational(0)});
    for (const auto& p : points) check_point(tower, p);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < inst.size_; ++i)
        for (std::size_t j = i + 1; j < inst.size_; ++j) pairs.emplace_back(i, j);
    std::vector<DistanceInterval> values(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
        values[k] = bowen_distance(tower, points[pairs[k].first], points[pairs[k].second], n);
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        inst.matrix_[i * inst.size_ + j] = values[k];
        inst.matrix_[j * inst.size_ + i] = values[k];
    }
    inst.points_ = std::move(points);
    return inst;
}

FiniteMetricInstance FiniteMetricInstance::from_matrix(const std::vector<std::vector<Rational>>& d) {
    const std::size_t size = d.size();
    for (const auto& row : d)
        if (row.size() != size) throw ValidationError("distance matrix is not square");
    for (std::size_t i = 0; i < size; ++i) {
        if (d[i][i] != 0) throw ValidationError("distance matrix has a nonzero diagonal entry");
        for (std::size_t j = 0; j < size; ++j) {
            if (d[i][j] < 0) throw ValidationError("negative distance");
            if (d[i][j] != d[j][i]) throw ValidationError("distance matrix is not symmetric");
            for (std::size_t k = 0; k < size; ++k)
                if (d[i][k] > d[i][j] + d[j][k])
                    throw ValidationError("triangle inequality fails at (" + std::to_string(i) + "," +
                                          std::to_string(j) + "," + std::to_string(k) + ")");
        }
    }
    FiniteMetricInstance inst;
    inst.size_ = size;
    for (const auto& row : d)
        for (const auto& v : row) inst.matrix_.push_back(DistanceInterval{v, v});
    return inst;
}

bool FiniteMetricInstance::within(std::size_t i, std::size_t j, const Rational& eps) const {
    const auto& d = distance(i, j);
    if (d.hi <= eps) return true;
    if (d.lo > eps) return false;
    throw UnresolvedComparison("distance of points " + std::to_string(i) + " and " + std::to_string(j) + " in [" +
                               to_string(d.lo) + ", " + to_string(d.hi) + "] straddles " + to_string(eps));
}

namespace {

using Adjacency = std::vector<std::vector<char>>;

// close[i][j]: d(i, j) <= eps (reflexive).
Adjacency proximity(const FiniteMetricInstance& inst, const Rational& eps) {
    const std::size_t size = inst.size();
    Adjacency close(size, std::vector<char>(size, 0));
    for (std::size_t i = 0; i < size; ++i) {
        close[i][i] = 1;
        for (std::size_t j = i + 1; j < size; ++j) close[i][j] = close[j][i] = inst.within(i, j, eps) ? 1 : 0;
    }
    return close;
}

// Greedy set cover by closed balls; ties go to the lowest index.
std::size_t greedy_spanning(const Adjacency& close) {
    const std::size_t size = close.size();
    std::vector<char> covered(size, 0);
    std::size_t left = size;
    std::size_t centers = 0;
    while (left > 0) {
        std::size_t best = 0;
        std::size_t best_gain = 0;
        for (std::size_t c = 0; c < size; ++c) {
            std::size_t gain = 0;
            for (std::size_t j = 0; j < size; ++j) gain += close[c][j] && !covered[j];
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        for (std::size_t j = 0; j < size; ++j)
            if (close[best][j] && !covered[j]) {
                covered[j] = 1;
                --left;
            }
        ++centers;
    }
    return centers;
}

// Maximal packing, scanning points by increasing proximity degree then index.
std::size_t greedy_packing(const Adjacency& close) {
    const std::size_t size = close.size();
    std::vector<std::size_t> order(size);
    std::vector<std::size_t> degree(size, 0);
    for (std::size_t i = 0; i < size; ++i) {
        order[i] = i;
        for (std::size_t j = 0; j < size; ++j) degree[i] += close[i][j];
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return degree[a] < degree[b]; });
    std::vector<std::size_t> chosen;
    for (std::size_t i : order) {
        bool free = true;
        for (std::size_t c : chosen) free = free && !close[i][c];
        if (free) chosen.push_back(i);
    }
    return chosen.size();
}

std::vector<std::uint32_t> masks(const Adjacency& close) {
    std::vector<std::uint32_t> out(close.size(), 0);
    for (std::size_t i = 0; i < close.size(); ++i)
        for (std::size_t j = 0; j < close.size(); ++j)
            if (close[i][j]) out[i] |= std::uint32_t{1} << j;
    return out;
}

// Minimum dominating set by branch and bound: the lowest uncovered point must be
// covered by one of its own neighbours.
std::size_t exact_spanning(const Adjacency& close) {
    const auto ball = masks(close);
    const std::size_t size = close.size();
    std::size_t best = size;
    int widest = 1;
    for (auto b : ball) widest = std::max(widest, std::popcount(b));
    std::function<void(std::uint32_t, std::size_t)> search = [&](std::uint32_t open, std::size_t used) {
        if (open == 0) {
            best = std::min(best, used);
            return;
        }
        const std::size_t need = (static_cast<std::size_t>(std::popcount(open)) + widest - 1) / widest;
        if (used + need >= best) return;
        const int u = std::countr_zero(open);
        for (std::size_t c = 0; c < size; ++c)
            if (ball[c] >> u & 1u) search(open & ~ball[c], used + 1);
    };
    search(size == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << size) - 1, 0);
    return best;
}

// Maximum independent set of the proximity graph.
std::size_t exact_packing(const Adjacency& close) {
    const auto ball = masks(close);
    const std::size_t size = close.size();
    std::size_t best = 0;
    std::function<void(std::uint32_t, std::size_t)> search = [&](std::uint32_t cand, std::size_t used) {
        if (used + static_cast<std::size_t>(std::popcount(cand)) <= best) return;
        if (cand == 0) {
            best = used;
            return;
        }
        const int v = std::countr_zero(cand);
        search(cand & ~ball[static_cast<std::size_t>(v)], used + 1);
        search(cand & ~(std::uint32_t{1} << v), used);
    };
    search((std::uint32_t{1} << size) - 1, 0);
    return best;
}

void require_positive(const Rational& eps) {
    if (eps <= 0) throw DomainError("eps must be positive");
}

}  // namespace

CountBounds spanning_number(const FiniteMetricInstance& instance, const Rational& eps, CountMode mode) {
    require_positive(eps);
    if (instance.size() == 0) return CountBounds::of_exact(0);
    const auto close = proximity(instance, eps);
    if (mode == CountMode::Exact && instance.size() <= kExactCutoff)
        return CountBounds::of_exact(static_cast<unsigned long>(exact_spanning(close)));
    const std::size_t upper = greedy_spanning(close);
    // A 2eps-separated subset meets each closed eps-ball at most once.
    std::size_t lower = 1;
    try {
        lower = std::max(lower, greedy_packing(proximity(instance, eps * 2)));
    } catch (const UnresolvedComparison&) {
    }
    return CountBounds::between(static_cast<unsigned long>(lower), static_cast<unsigned long>(upper));
}

CountBounds packing_number(const FiniteMetricInstance& instance, const Rational& eps, CountMode mode) {
    require_positive(eps);
    if (instance.size() == 0) return CountBounds::of_exact(0);
    const auto close = proximity(instance, eps);
    if (mode == CountMode::Exact && instance.size() <= kExactCutoff)
        return CountBounds::of_exact(static_cast<unsigned long>(exact_packing(close)));
    const std::size_t lower = greedy_packing(close);
    // Two points in one closed eps/2-ball are within eps of each other.
    std::size_t upper = instance.size();
    try {
        upper = std::min(upper, greedy_spanning(proximity(instance, eps / 2)));
    } catch (const UnresolvedComparison&) {
    }
    return CountBounds::between(static_cast<unsigned long>(lower), static_cast<unsigned long>(upper));
}

SeparationAudit verify_separated(const std::vector<PointWindow>& points, const Tower& tower, long n,
                                 const Rational& eps, bool strict) {
    require_positive(eps);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const auto d = bowen_distance(tower, points[i], points[j], n);
            const bool good = strict ? d.lo > eps : d.lo >= eps;
            if (good) continue;
            const bool bad = strict ? d.hi <= eps : d.hi < eps;
            if (!bad)
                throw UnresolvedComparison("separation of points " + std::to_string(i) + " and " + std::to_string(j) +
                                           " is undecided: distance in [" + to_string(d.lo) + ", " +
                                           to_string(d.hi) + "]");
            return SeparationAudit{false, i, j, d};
        }
    return SeparationAudit{};
}

// ---------------------------------------------------------------------------
// Itinerary counts

namespace {

struct LabelTables {
    int alphabet = 0;
    std::vector<std::uint64_t> successors;               // per level-0 symbol
    std::vector<std::vector<std::uint64_t>> label_sets;  // [level][label] -> level-0 symbols
    std::vector<std::size_t> grade;                      // per position
};

LabelTables label_tables(const Tower& tower, const std::vector<long>& windows) {
    require_valid(tower);
    if (!tower.is_symbolic()) throw DomainError("itinerary counts need a symbolic tower");
    if (windows.size() != tower.depth()) throw DomainError("one window per level required");
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (windows[i] < 1) throw DomainError("windows must be positive");
        if (i > 0 && windows[i] < windows[i - 1]) throw DomainError("windows must be nondecreasing");
    }
    const auto& base = tower.symbolic(0);
    if (base.alphabet > 64) throw DomainError("itinerary counts support at most 64 level-1 symbols");
    LabelTables t;
    t.alphabet = base.alphabet;
    t.successors.assign(static_cast<std::size_t>(base.alphabet), 0);
    for (int a = 0; a < base.alphabet; ++a)
        for (int b = 0; b < base.alphabet; ++b)
            if (base.allowed(a, b)) t.successors[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
    for (std::size_t level = 0; level < tower.depth(); ++level) {
        const auto map = tower.chain_symbol_map(level);
        std::vector<std::uint64_t> sets(static_cast<std::size_t>(tower.symbolic(level).alphabet), 0);
        for (int a = 0; a < base.alphabet; ++a) sets[static_cast<std::size_t>(map[static_cast<std::size_t>(a)])] |= std::uint64_t{1} << a;
        t.label_sets.push_back(std::move(sets));
    }
    std::size_t level = 0;
    for (long p = 0; p < windows.back(); ++p) {
        while (p >= windows[level]) ++level;
        t.grade.push_back(level);
    }
    return t;
}

BigInt itinerary_dp(const LabelTables& t) {
    // Each distinct label prefix determines the set of level-0 symbols it can end
    // in, so counting prefixes per reachable set counts distinct label words.
    std::map<std::uint64_t, BigInt> states;
    for (std::size_t p = 0; p < t.grade.size(); ++p) {
        const auto& sets = t.label_sets[t.grade[p]];
        std::map<std::uint64_t, BigInt> next;
        if (p == 0) {
            for (auto s : sets)
                if (s) next[s] += 1;
        } else {
            for (const auto& [state, count] : states) {
                std::uint64_t reach = 0;
                for (std::uint64_t rest = state; rest; rest &= rest - 1)
                    reach |= t.successors[static_cast<std::size_t>(std::countr_zero(rest))];
                for (auto s : sets)
                    if (reach & s) next[reach & s] += count;
            }
        }
        states = std::move(next);
    }
    BigInt total = 0;
    for (const auto& [state, count] : states) total += count;
    return total;
}

}  // namespace

BigInt itinerary_count_bruteforce(const Tower& tower, const std::vector<long>& windows, std::uint64_t word_limit) {
    const auto t = label_tables(tower, windows);
    const long length = windows.back();
    BigInt words = pow(BigInt(t.alphabet), static_cast<unsigned long>(length));
    if (words > BigInt(static_cast<unsigned long>(word_limit)))
        throw DomainError("brute-force enumeration limited to " + std::to_string(word_limit) + " words");
    std::vector<std::vector<int>> label_of(t.label_sets.size(), std::vector<int>(static_cast<std::size_t>(t.alphabet)));
    for (std::size_t level = 0; level < t.label_sets.size(); ++level)
        for (std::size_t lab = 0; lab < t.label_sets[level].size(); ++lab)
            for (int a = 0; a < t.alphabet; ++a)
                if (t.label_sets[level][lab] >> a & 1u) label_of[level][static_cast<std::size_t>(a)] = static_cast<int>(lab);
    std::set<std::vector<int>> seen;
    std::vector<int> word(static_cast<std::size_t>(length));
    std::function<void(long)> extend = [&](long p) {
        if (p == length) {
            std::vector<int> labels(word.size());
            for (std::size_t q = 0; q < word.size(); ++q)
                labels[q] = label_of[t.grade[q]][static_cast<std::size_t>(word[q])];
            seen.insert(std::move(labels));
            return;
        }
        for (int a = 0; a < t.alphabet; ++a) {
            if (p > 0 && !(t.successors[static_cast<std::size_t>(word[static_cast<std::size_t>(p - 1)])] >> a & 1u))
                continue;
            word[static_cast<std::size_t>(p)] = a;
            extend(p + 1);
        }
    };
    extend(0);
    return BigInt(static_cast<unsigned long>(seen.size()));
}

CountBounds itinerary_count_windows(const Tower& tower, const std::vector<long>& windows) {
    const auto t = label_tables(tower, windows);
    BigInt count = itinerary_dp(t);
    constexpr std::uint64_t cross_check_limit = std::uint64_t{1} << 16;
    if (pow(BigInt(t.alphabet), static_cast<unsigned long>(windows.back())) <= BigInt(static_cast<unsigned long>(cross_check_limit))) {
        BigInt direct = itinerary_count_bruteforce(tower, windows, cross_check_limit);
        if (direct != count)
            throw std::logic_error("itinerary count mismatch: dp " + to_string(count) + " vs enumeration " +
                                   to_string(direct));
    }
    return CountBounds::of_exact(count);
}

CountBounds itinerary_count(const Tower& tower, long n, long margin) {
    if (margin < 0) throw DomainError("margin must be nonnegative");
    auto windows = tower.windows(n);
    for (auto& w : windows) w += 2 * margin;
    return itinerary_count_windows(tower, windows);
}

}  // namespace wmd
