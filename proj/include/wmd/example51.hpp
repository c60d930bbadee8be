#pragma once

#include "wmd/counting.hpp"
#include "wmd/invariants.hpp"
#include "wmd/tower.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wmd {

// ([0,1]^2)^Z -> [0,1]^Z keeping the first component, weights (a1, a2).
Tower two_level_cube_tower(const Rational& a1 = Rational(1), const Rational& a2 = Rational(1));

struct BenchmarkOptions {
    std::vector<long> faithful_n{2, 4, 8, 16};
    std::vector<Rational> faithful_eps;  // default 2^-2 .. 2^-6
    std::vector<long> audit_n{4, 8, 16};
    std::vector<Rational> audit_eps;     // default 2^-4 .. 2^-9
    long counterexample_n = 3;
    Rational counterexample_eps{1, 4};
    std::uint64_t seed = 0;

    BenchmarkOptions();
};

struct FaithfulLine {
    long n = 0;
    Rational eps;
    long pad = 0;
    BigInt base;
    long exponent = 0;
    long formula_exponent = 0;  // 4n + 4l + 2
    bool certified = false;
};

struct BenchmarkReport {
    std::vector<FaithfulLine> faithful;
    std::vector<FaithfulLine> tight;  // formula_exponent holds 3n + 4l + 2
    std::vector<PackingGrid> packing;
    GridFamily claimed;
    GridAudit audit;
    SeparationAudit pair_audit;  // the audit pair run through the pairwise checker
    MmdimReport faithful_slopes;
    MmdimReport audited_slopes;
    double claimed_value = 4.0;
};

BenchmarkReport run_cube_benchmark(const BenchmarkOptions& options);
std::string render_benchmark(const BenchmarkReport& report, const BenchmarkOptions& options);

}  // namespace wmd
