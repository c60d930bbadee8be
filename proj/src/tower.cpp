#include "wmd/tower.hpp"

#include "wmd/error.hpp"

#include <set>
#include <sstream>

namespace wmd {

WeightVector::WeightVector(std::vector<Rational> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("weight vector must have at least one entry");
    if (entries_[0] <= 0) throw ValidationError("weight a_1 must be positive, got " + to_string(entries_[0]));
    Rational sum = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i] < 0) {
            throw ValidationError("weight a_" + std::to_string(i + 1) + " must be nonnegative, got " +
                                  to_string(entries_[i]));
        }
        sum += entries_[i];
        partial_.push_back(sum);
    }
}

std::vector<long> window_lengths(const WeightVector& weights, long n) {
    if (n < 1) throw DomainError("window length needs n >= 1, got " + std::to_string(n));
    std::vector<long> out;
    out.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out.push_back(to_long(ceil_of(weights.partial_sum(i) * Rational(n))));
    }
    return out;
}

SymbolicSystem SymbolicSystem::full(int alphabet) {
    SymbolicSystem s;
    s.alphabet = alphabet;
    s.transitions.assign(static_cast<std::size_t>(alphabet < 0 ? 0 : alphabet),
                         std::vector<std::uint8_t>(static_cast<std::size_t>(alphabet < 0 ? 0 : alphabet), 1));
    return s;
}

SymbolicSystem SymbolicSystem::sft(std::vector<std::vector<std::uint8_t>> transitions) {
    SymbolicSystem s;
    s.alphabet = static_cast<int>(transitions.size());
    s.transitions = std::move(transitions);
    return s;
}

bool SymbolicSystem::is_full() const {
    for (const auto& row : transitions)
        for (auto v : row)
            if (v == 0) return false;
    return true;
}

ForgetfulFactor ForgetfulFactor::project(int keep) {
    ForgetfulFactor f;
    f.kind = Kind::Project;
    f.keep = keep;
    return f;
}

ForgetfulFactor ForgetfulFactor::merge(std::vector<int> symbol_map) {
    ForgetfulFactor f;
    f.kind = Kind::Merge;
    f.symbol_map = std::move(symbol_map);
    return f;
}

Tower::Tower(std::vector<System> levels, std::vector<ForgetfulFactor> factors, WeightVector weights)
    : levels_(std::move(levels)), factors_(std::move(factors)), weights_(std::move(weights)) {}

TowerKind Tower::kind() const {
    bool sym = false;
    bool cube = false;
    for (const auto& level : levels_) {
        if (std::holds_alternative<SymbolicSystem>(level)) sym = true;
        else cube = true;
    }
    if (sym && cube) return TowerKind::Mixed;
    return sym ? TowerKind::Symbolic : TowerKind::Cube;
}

const SymbolicSystem& Tower::symbolic(std::size_t level) const {
    const auto* s = std::get_if<SymbolicSystem>(&levels_.at(level));
    if (!s) throw DomainError("level " + std::to_string(level + 1) + " is not symbolic");
    return *s;
}

const CubeSystem& Tower::cube(std::size_t level) const {
    const auto* c = std::get_if<CubeSystem>(&levels_.at(level));
    if (!c) throw DomainError("level " + std::to_string(level + 1) + " is not a cube system");
    return *c;
}

std::vector<int> Tower::chain_symbol_map(std::size_t level) const {
    const auto& base = symbolic(0);
    std::vector<int> map(static_cast<std::size_t>(base.alphabet));
    for (int s = 0; s < base.alphabet; ++s) map[static_cast<std::size_t>(s)] = s;
    for (std::size_t i = 0; i < level; ++i) {
        const auto& f = factors_.at(i);
        if (f.kind != ForgetfulFactor::Kind::Merge) throw DomainError("symbolic factor must be a merge map");
        for (auto& s : map) s = f.symbol_map.at(static_cast<std::size_t>(s));
    }
    return map;
}

int Tower::visible_components(std::size_t level) const {
    int visible = cube(0).components;
    for (std::size_t i = 0; i < level; ++i) {
        const auto& f = factors_.at(i);
        if (f.kind != ForgetfulFactor::Kind::Project) throw DomainError("cube factor must be a projection");
        visible = std::min(visible, f.keep);
    }
    return visible;
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << violations[i];
    }
    return out.str();
}

namespace {

void check_symbolic_level(const SymbolicSystem& s, std::size_t index, ValidationReport& report) {
    const std::string where = "level " + std::to_string(index + 1);
    if (s.alphabet < 1) {
        report.violations.push_back(where + ": alphabet must be nonempty");
        return;
    }
    const auto q = static_cast<std::size_t>(s.alphabet);
    if (s.transitions.size() != q) {
        report.violations.push_back(where + ": transition matrix has " + std::to_string(s.transitions.size()) +
                                    " rows, expected " + std::to_string(q));
        return;
    }
    for (std::size_t a = 0; a < q; ++a) {
        if (s.transitions[a].size() != q) {
            report.violations.push_back(where + ": transition row " + std::to_string(a) + " has wrong length");
            return;
        }
        for (auto v : s.transitions[a]) {
            if (v > 1) {
                report.violations.push_back(where + ": transition entries must be 0 or 1");
                return;
            }
        }
    }
    for (std::size_t a = 0; a < q; ++a) {
        bool out = false;
        bool in = false;
        for (std::size_t b = 0; b < q; ++b) {
            out = out || s.transitions[a][b];
            in = in || s.transitions[b][a];
        }
        if (!out) report.violations.push_back(where + ": symbol " + std::to_string(a) + " has no successor");
        if (!in) report.violations.push_back(where + ": symbol " + std::to_string(a) + " has no predecessor");
    }
}

void check_cube_level(const CubeSystem& c, std::size_t index, ValidationReport& report) {
    const std::string where = "level " + std::to_string(index + 1);
    if (c.components < 1) report.violations.push_back(where + ": cube needs at least one component");
    if (c.period < 0) report.violations.push_back(where + ": period must be nonnegative");
}

void check_merge(const SymbolicSystem& src, const SymbolicSystem& dst, const ForgetfulFactor& f,
                 std::size_t index, ValidationReport& report) {
    const std::string where = "factor " + std::to_string(index + 1);
    if (f.kind != ForgetfulFactor::Kind::Merge) {
        report.violations.push_back(where + ": symbolic levels need a merge factor");
        return;
    }
    if (f.symbol_map.size() != static_cast<std::size_t>(src.alphabet)) {
        report.violations.push_back(where + ": map has " + std::to_string(f.symbol_map.size()) +
                                    " entries, source alphabet has " + std::to_string(src.alphabet));
        return;
    }
    std::set<int> image;
    for (int t : f.symbol_map) {
        if (t < 0 || t >= dst.alphabet) {
            report.violations.push_back(where + ": symbol " + std::to_string(t) + " outside target alphabet");
            return;
        }
        image.insert(t);
    }
    if (static_cast<int>(image.size()) != dst.alphabet) {
        report.violations.push_back(where + ": map is not onto the target alphabet");
    }
    std::set<std::pair<int, int>> hit;
    for (int a = 0; a < src.alphabet; ++a) {
        for (int b = 0; b < src.alphabet; ++b) {
            if (!src.allowed(a, b)) continue;
            int fa = f.symbol_map[static_cast<std::size_t>(a)];
            int fb = f.symbol_map[static_cast<std::size_t>(b)];
            hit.insert({fa, fb});
            if (!dst.allowed(fa, fb)) {
                report.violations.push_back(where + ": transition " + std::to_string(fa) + "->" + std::to_string(fb) +
                                            " not allowed in target (image of " + std::to_string(a) + "->" +
                                            std::to_string(b) + ")");
            }
        }
    }
    for (int a = 0; a < dst.alphabet; ++a) {
        for (int b = 0; b < dst.alphabet; ++b) {
            if (dst.allowed(a, b) && !hit.count({a, b})) {
                report.violations.push_back(where + ": target transition " + std::to_string(a) + "->" +
                                            std::to_string(b) + " is not the image of any source transition");
            }
        }
    }
}

void check_project(const CubeSystem& src, const CubeSystem& dst, const ForgetfulFactor& f, std::size_t index,
                   ValidationReport& report) {
    const std::string where = "factor " + std::to_string(index + 1);
    if (f.kind != ForgetfulFactor::Kind::Project) {
        report.violations.push_back(where + ": cube levels need a projection factor");
        return;
    }
    if (f.keep < 1 || f.keep > src.components) {
        report.violations.push_back(where + ": keep=" + std::to_string(f.keep) + " outside 1.." +
                                    std::to_string(src.components));
    } else if (f.keep != dst.components) {
        report.violations.push_back(where + ": keeps " + std::to_string(f.keep) + " components but target has " +
                                    std::to_string(dst.components));
    }
    if (src.period != dst.period) report.violations.push_back(where + ": source and target periods differ");
}

}  // namespace

ValidationReport validate_tower(const Tower& tower) {
    ValidationReport report;
    const std::size_t k = tower.depth();
    if (k == 0) {
        report.violations.push_back("tower has no levels");
        return report;
    }
    if (tower.factors().size() != k - 1) {
        report.violations.push_back("expected " + std::to_string(k - 1) + " factors, got " +
                                    std::to_string(tower.factors().size()));
    }
    if (tower.weights().size() != k) {
        report.violations.push_back("expected " + std::to_string(k) + " weights, got " +
                                    std::to_string(tower.weights().size()));
    }
    if (k == 1) report.notes.push_back("extension: single-level tower (k=1), classic definitions");
    if (tower.kind() == TowerKind::Mixed) {
        report.violations.push_back("mixed symbolic/cube levels are not supported");
        return report;
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (const auto* s = std::get_if<SymbolicSystem>(&tower.levels()[i])) check_symbolic_level(*s, i, report);
        else check_cube_level(std::get<CubeSystem>(tower.levels()[i]), i, report);
    }
    if (!report.ok() || tower.factors().size() != k - 1) return report;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const auto& f = tower.factors()[i];
        if (tower.is_symbolic()) check_merge(tower.symbolic(i), tower.symbolic(i + 1), f, i, report);
        else check_project(tower.cube(i), tower.cube(i + 1), f, i, report);
    }
    return report;
}

void require_valid(const Tower& tower) {
    auto report = validate_tower(tower);
    if (!report.ok()) throw ValidationError("invalid tower: " + report.summary());
}

std::vector<int> apply_chain(const Tower& tower, std::size_t level, const std::vector<int>& word) {
    auto map = tower.chain_symbol_map(level);
    std::vector<int> out;
    out.reserve(word.size());
    for (int s : word) out.push_back(map.at(static_cast<std::size_t>(s)));
    return out;
}

}  // namespace wmd
