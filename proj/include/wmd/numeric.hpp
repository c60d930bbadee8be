#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wmd {

using BigInt = mpz_class;
using Rational = mpq_class;

// Accepts "p/q", "p" and "-p/q"; the result is canonicalized.
Rational parse_rational(std::string_view text);

// Canonical exact rendering: "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

// Fixed decimal rendering with `digits` significant digits.
std::string to_decimal(double value, int digits = 12);
std::string to_decimal(const Rational& value, int digits = 12);

BigInt floor_of(const Rational& value);
BigInt ceil_of(const Rational& value);
long to_long(const BigInt& value);

// 2^e for any integer e.
Rational pow2(long e);
BigInt pow(const BigInt& base, unsigned long exponent);

// p/2^k with k >= 0.
bool is_dyadic(const Rational& value);

// Natural log of a positive integer, accurate to double precision for any size.
// Returns -inf for zero.
double log_of(const BigInt& value);
double log_of(const Rational& value);

// Largest g with value = root^g; returns {value, 1} when value is not a perfect power.
std::pair<BigInt, unsigned long> perfect_power(const BigInt& value);

// An exact real of the form sum_j coef_j * log(base_j) with positive integer bases.
// Entropy and S-values are always of this shape, so equality and ordering
// between them can be decided exactly by comparing integer powers.
class LogValue {
public:
    LogValue() = default;

    static LogValue log(const BigInt& base);  // log(base), base >= 1
    static LogValue scaled_log(const Rational& coef, const BigInt& base);

    LogValue operator+(const LogValue& other) const;
    LogValue operator-(const LogValue& other) const;
    LogValue operator-() const;
    LogValue operator*(const Rational& factor) const;

    double to_double() const;
    bool is_zero() const;

    // Exact sign of the value (-1, 0, 1).
    int sign() const;
    LogValue abs() const;

    // Canonical rendering: "log(8)", "log(32)/2", "0", or a sum of such terms.
    std::string to_string() const;

    const std::vector<std::pair<BigInt, Rational>>& terms() const { return terms_; }

private:
    void normalize();

    // sorted by base, bases > 1, nonzero coefficients
    std::vector<std::pair<BigInt, Rational>> terms_;
};

int compare(const LogValue& a, const LogValue& b);
inline bool operator==(const LogValue& a, const LogValue& b) { return compare(a, b) == 0; }
inline bool operator<(const LogValue& a, const LogValue& b) { return compare(a, b) < 0; }
inline bool operator<=(const LogValue& a, const LogValue& b) { return compare(a, b) <= 0; }

// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;
};

// Throws DomainError when fewer than two distinct x values are supplied.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wmd
