#include "wmd/numeric.hpp"

#include "wmd/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

namespace wmd {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto first = s.find_first_not_of(" \t");
    auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("", "empty rational");
    s = s.substr(first, last - first + 1);

    auto valid_int = [](const std::string& part) {
        std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i >= part.size()) return false;
        return std::all_of(part.begin() + static_cast<long>(i), part.end(),
                           [](char ch) { return ch >= '0' && ch <= '9'; });
    };

    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
        throw ConfigError("", "not a rational of the form p/q: '" + s + "'");
    }
    BigInt n(num, 10);
    BigInt d(den, 10);
    if (d == 0) throw ConfigError("", "zero denominator in '" + s + "'");
    Rational out(n, d);
    out.canonicalize();
    return out;
}

std::string to_string(const Rational& value) {
    Rational v = value;
    v.canonicalize();
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

std::string to_decimal(double value, int digits) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

std::string to_decimal(const Rational& value, int digits) { return to_decimal(value.get_d(), digits); }

BigInt floor_of(const Rational& value) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return out;
}

BigInt ceil_of(const Rational& value) {
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return out;
}

long to_long(const BigInt& value) {
    if (!value.fits_slong_p()) throw DomainError("integer out of range: " + value.get_str());
    return value.get_si();
}

Rational pow2(long e) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0) return Rational(p);
    return Rational(BigInt(1), p);
}

BigInt pow(const BigInt& base, unsigned long exponent) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

bool is_dyadic(const Rational& value) {
    const BigInt& d = value.get_den();
    return mpz_popcount(d.get_mpz_t()) == 1;
}

double log_of(const BigInt& value) {
    if (value < 0) throw DomainError("log of negative integer");
    if (value == 0) return -std::numeric_limits<double>::infinity();
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, value.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double log_of(const Rational& value) { return log_of(value.get_num()) - log_of(value.get_den()); }

std::pair<BigInt, unsigned long> perfect_power(const BigInt& value) {
    if (value <= 1) return {value, 1};
    unsigned long bits = mpz_sizeinbase(value.get_mpz_t(), 2);
    for (unsigned long g = bits; g >= 2; --g) {
        BigInt root;
        if (mpz_root(root.get_mpz_t(), value.get_mpz_t(), g) != 0) return {root, g};
    }
    return {value, 1};
}

// ---------------------------------------------------------------------------
// LogValue

LogValue LogValue::log(const BigInt& base) { return scaled_log(Rational(1), base); }

LogValue LogValue::scaled_log(const Rational& coef, const BigInt& base) {
    if (base < 1) throw DomainError("log of non-positive integer " + base.get_str());
    LogValue out;
    out.terms_.emplace_back(base, coef);
    out.normalize();
    return out;
}

void LogValue::normalize() {
    std::map<BigInt, Rational> merged;
    for (auto& [base, coef] : terms_) {
        if (base == 1) continue;
        merged[base] += coef;
    }
    terms_.clear();
    for (auto& [base, coef] : merged) {
        if (coef != 0) terms_.emplace_back(base, coef);
    }
}

LogValue LogValue::operator+(const LogValue& other) const {
    LogValue out = *this;
    out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
    out.normalize();
    return out;
}

LogValue LogValue::operator-() const {
    LogValue out = *this;
    for (auto& t : out.terms_) t.second = -t.second;
    return out;
}

LogValue LogValue::operator-(const LogValue& other) const { return *this + (-other); }

LogValue LogValue::operator*(const Rational& factor) const {
    LogValue out = *this;
    for (auto& t : out.terms_) t.second *= factor;
    out.normalize();
    return out;
}

double LogValue::to_double() const {
    double sum = 0.0;
    for (const auto& [base, coef] : terms_) sum += coef.get_d() * log_of(base);
    return sum;
}

bool LogValue::is_zero() const { return sign() == 0; }

namespace {

// Common denominator D and the two integer sides P, Q with value = log(P/Q)/D.
struct PowerSides {
    BigInt denominator{1};
    BigInt positive{1};
    BigInt negative{1};
};

constexpr double kMaxExactBits = 1u << 26;

PowerSides power_sides(const std::vector<std::pair<BigInt, Rational>>& terms) {
    PowerSides sides;
    for (const auto& t : terms) mpz_lcm(sides.denominator.get_mpz_t(), sides.denominator.get_mpz_t(),
                                        t.second.get_den_mpz_t());
    double bits = 0.0;
    for (const auto& [base, coef] : terms) {
        Rational e = coef * Rational(sides.denominator);
        bits += std::fabs(e.get_d()) * static_cast<double>(mpz_sizeinbase(base.get_mpz_t(), 2));
    }
    if (bits > kMaxExactBits) throw DomainError("log comparison too large for exact evaluation");
    for (const auto& [base, coef] : terms) {
        BigInt e = Rational(coef * Rational(sides.denominator)).get_num();
        if (e > 0) {
            sides.positive *= pow(base, e.get_ui());
        } else {
            BigInt m = -e;
            sides.negative *= pow(base, m.get_ui());
        }
    }
    return sides;
}

}  // namespace

int LogValue::sign() const {
    if (terms_.empty()) return 0;
    double v = 0.0;
    double scale = 0.0;
    for (const auto& [base, coef] : terms_) {
        double t = coef.get_d() * log_of(base);
        v += t;
        scale += std::fabs(t);
    }
    if (std::fabs(v) > 1e-9 * std::max(1.0, scale)) return v > 0 ? 1 : -1;
    PowerSides sides = power_sides(terms_);
    int c = cmp(sides.positive, sides.negative);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

LogValue LogValue::abs() const { return sign() < 0 ? -*this : *this; }

std::string LogValue::to_string() const {
    if (terms_.empty()) return "0";
    PowerSides sides;
    try {
        sides = power_sides(terms_);
    } catch (const DomainError&) {
        std::string out;
        for (const auto& [base, coef] : terms_) {
            if (!out.empty()) out += " + ";
            out += wmd::to_string(coef) + "*log(" + base.get_str() + ")";
        }
        return out;
    }
    if (sides.positive == sides.negative) return "0";
    // value = log(P/Q)/D; pull out the largest common perfect power of P and Q.
    auto [p_root, p_exp] = perfect_power(sides.positive);
    auto [q_root, q_exp] = perfect_power(sides.negative);
    unsigned long g = 0;
    if (sides.negative == 1) {
        g = p_exp;
    } else if (sides.positive == 1) {
        g = q_exp;
    } else {
        g = std::gcd(p_exp, q_exp);
    }
    BigInt p_base = sides.positive == 1 ? BigInt(1) : pow(p_root, p_exp / g);
    BigInt q_base = sides.negative == 1 ? BigInt(1) : pow(q_root, q_exp / g);
    Rational coef(BigInt(g), sides.denominator);
    coef.canonicalize();
    // coef * log(p_base/q_base); fold the integer numerator back into the argument.
    BigInt num = coef.get_num();
    BigInt den = coef.get_den();
    // Small arguments are folded ("log(8)"); large ones keep the multiplier ("52*log(7)").
    const bool fold = mpz_sizeinbase(p_base.get_mpz_t(), 2) * num.get_ui() <= 60 &&
                      mpz_sizeinbase(q_base.get_mpz_t(), 2) * num.get_ui() <= 60;
    BigInt arg_num = fold ? pow(p_base, num.get_ui()) : p_base;
    BigInt arg_den = fold ? pow(q_base, num.get_ui()) : q_base;
    std::string arg = arg_den == 1 ? arg_num.get_str() : arg_num.get_str() + "/" + arg_den.get_str();
    std::string out = (fold || num == 1 ? "" : num.get_str() + "*") + "log(" + arg + ")";
    if (den != 1) out += "/" + den.get_str();
    return out;
}

int compare(const LogValue& a, const LogValue& b) { return (a - b).sign(); }

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("regression inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("regression needs at least two points");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw DomainError("degenerate regression: all abscissae equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.residuals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) fit.residuals.push_back(y[i] - (fit.intercept + fit.slope * x[i]));
    return fit;
}

}  // namespace wmd
