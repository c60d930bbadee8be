#pragma once

#include "wmd/counting.hpp"
#include "wmd/numeric.hpp"
#include "wmd/tower.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wmd {

// Which cube construction feeds S-values. Best takes the smaller of the two.
enum class SMode { Faithful, Tight, Best };

struct SRow {
    long n = 0;
    LogValue log_count;  // log of the certified cover cardinality
    LogValue value;      // log_count / n
    bool certified = true;
    std::string source;  // "faithful", "tight" or "itinerary"
};

// Per-n values of (1/n) log(cover count) at a fixed eps.
struct SEstimate {
    Rational eps;
    std::vector<SRow> rows;
    // limsup proxy: intercept of the least-squares line of value against 1/n,
    // which removes the O(1/n) padding term. Equals the single value for one n.
    double extrapolated = 0.0;
    double largest_n = 0.0;  // value at the largest n, for reference
};

SEstimate s_epsilon_estimate(const Tower& tower, const Rational& eps, const std::vector<long>& n_list,
                             SMode mode = SMode::Best, std::uint64_t seed = 0);

struct EntropyRow {
    long n = 0;
    std::vector<long> windows;
    BigInt count;
    LogValue value;  // (1/n) log count, exact
    std::optional<LogValue> cauchy_gap;  // |value - previous value|
};

struct EntropyEstimate {
    std::vector<EntropyRow> rows;
    LogValue extrapolated;                // value at the largest n
    std::optional<LogValue> closed_form;  // sum_i a_i log |A_i| for towers of full shifts
    std::optional<LogValue> closed_form_gap;
    LogValue upper_bound;                 // sum_i a_i log |A_i| for any tower
};

EntropyEstimate entropy_estimate(const Tower& tower, const std::vector<long>& n_list);

struct MmdimCell {
    long n = 0;
    Rational eps;
    LogValue log_lower;
    LogValue log_upper;
    bool lower_certified = false;
    bool upper_certified = false;
};

struct MmdimSummary {
    Rational eps;
    double s_upper = 0.0;  // extrapolated
    double s_lower = 0.0;
    double s_upper_largest_n = 0.0;
    double s_lower_largest_n = 0.0;
};

struct MmdimReport {
    std::string mode;
    bool symbolic = false;
    std::vector<MmdimCell> cells;  // ordered by (n, eps)
    std::vector<MmdimSummary> summary;
    double slope_lo = 0.0;
    double slope_hi = 0.0;
    double slope_upper_data = 0.0;  // slope of the upper S-values
    double slope_lower_data = 0.0;  // slope of the lower S-values
    bool crossed = false;           // lower-data slope came out above upper-data slope
    std::vector<double> residuals_hi;
    std::vector<double> residuals_lo;
    std::optional<LogValue> entropy_bound;  // symbolic towers only
    bool all_certified = true;
};

// Slope bracket for the weighted metric mean dimension over a dyadic eps grid.
// Cube towers regress cover (upper) and packing-grid (lower) S-values on |log eps|;
// symbolic towers have finite entropy, so the bracket is [0, 0] and the data slope
// of the itinerary S-values is reported alongside.
MmdimReport mmdim_estimate(const Tower& tower, const std::vector<Rational>& eps_list, const std::vector<long>& n_list,
                           SMode mode = SMode::Tight, std::uint64_t seed = 0);

// CSV blocks: cells, per-eps summary, and the final slope line.
std::string mmdim_csv(const MmdimReport& report);

// Tower of T^m: every level recoded to admissible m-blocks, factor maps applied blockwise.
Tower iterate_tower(const Tower& tower, long m);

struct PowerRow {
    long n = 0;
    LogValue iterated;   // E_{T^m}(n)
    LogValue scaled;     // m * E(n)
    LogValue deviation;  // |iterated - scaled|
    LogValue gap;        // m * |E(mn) - E(n)|
    bool within_gap = false;
    bool recode_matches = false;  // T^m count equals the original count on windows m * L_i
};

struct PowerRuleReport {
    long m = 1;
    std::vector<PowerRow> rows;
    LogValue max_deviation;
    bool gaps_shrinking = true;  // gap nonincreasing in n
};

PowerRuleReport power_rule_probe(const Tower& tower, long m, const std::vector<long>& n_list);

}  // namespace wmd
