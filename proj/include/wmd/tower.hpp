#pragma once

#include "wmd/numeric.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace wmd {

// Weights (a_1, ..., a_k) with a_1 > 0 and a_i >= 0. Level i (0-based) looks
// at a time window of length ceil(A_i * n) with A_i = a_1 + ... + a_{i+1}.
class WeightVector {
public:
    // Throws ValidationError when the sign constraints fail or k = 0.
    explicit WeightVector(std::vector<Rational> entries);

    std::size_t size() const { return entries_.size(); }
    const Rational& operator[](std::size_t i) const { return entries_.at(i); }
    const Rational& partial_sum(std::size_t i) const { return partial_.at(i); }
    const std::vector<Rational>& entries() const { return entries_; }

private:
    std::vector<Rational> entries_;
    std::vector<Rational> partial_;
};

// L_i = ceil(A_i * n), computed in exact rational arithmetic. Requires n >= 1.
std::vector<long> window_lengths(const WeightVector& weights, long n);

// Two-sided subshift of finite type given by a 0/1 vertex transition matrix.
struct SymbolicSystem {
    int alphabet = 1;
    std::vector<std::vector<std::uint8_t>> transitions;

    static SymbolicSystem full(int alphabet);
    static SymbolicSystem sft(std::vector<std::vector<std::uint8_t>> transitions);

    bool allowed(int from, int to) const { return transitions[from][to] != 0; }
    bool is_full() const;
};

// Shift on ([0,1]^components)^Z with d(x,y) = sum_m 2^-|m| max_c |x_{m,c} - y_{m,c}|.
// A positive period restricts to period-p sequences, a finite-dimensional system.
struct CubeSystem {
    int components = 1;
    long period = 0;
};

using System = std::variant<SymbolicSystem, CubeSystem>;

// 1-block factor maps only: a cube level keeps a prefix of its components,
// a symbolic level maps its alphabet onto the next one.
struct ForgetfulFactor {
    enum class Kind { Project, Merge };

    Kind kind = Kind::Project;
    int keep = 0;
    std::vector<int> symbol_map;

    static ForgetfulFactor project(int keep);
    static ForgetfulFactor merge(std::vector<int> symbol_map);
};

enum class TowerKind { Symbolic, Cube, Mixed };

class Tower {
public:
    Tower(std::vector<System> levels, std::vector<ForgetfulFactor> factors, WeightVector weights);

    std::size_t depth() const { return levels_.size(); }
    const std::vector<System>& levels() const { return levels_; }
    const std::vector<ForgetfulFactor>& factors() const { return factors_; }
    const WeightVector& weights() const { return weights_; }

    TowerKind kind() const;
    bool is_symbolic() const { return kind() == TowerKind::Symbolic; }
    bool is_cube() const { return kind() == TowerKind::Cube; }

    // Typed level access; throws DomainError on a kind mismatch.
    const SymbolicSystem& symbolic(std::size_t level) const;
    const CubeSystem& cube(std::size_t level) const;

    std::vector<long> windows(long n) const { return window_lengths(weights_, n); }

    // tau_level restricted to the alphabet: level-0 symbol -> level symbol.
    std::vector<int> chain_symbol_map(std::size_t level) const;

    // Number of level-0 components still visible at `level` (tau is a prefix projection).
    int visible_components(std::size_t level) const;

private:
    std::vector<System> levels_;
    std::vector<ForgetfulFactor> factors_;
    WeightVector weights_;
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> notes;

    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

// Violations are returned as data. Level and factor numbers in messages are 1-based.
ValidationReport validate_tower(const Tower& tower);

// Throws ValidationError carrying the report summary when validation fails.
void require_valid(const Tower& tower);

// Applies tau_level symbolwise to a level-0 word.
std::vector<int> apply_chain(const Tower& tower, std::size_t level, const std::vector<int>& word);

}  // namespace wmd
