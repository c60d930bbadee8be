#pragma once

#include "wmd/tower.hpp"
#include "wmd/tower_io.hpp"

#include <random>
#include <string>

namespace wmd::test {

inline std::string data(const std::string& name) { return std::string(WMD_TEST_DATA) + "/" + name; }

inline Tower tower_file(const std::string& name) { return load_tower(data(name)); }

inline Rational q(const char* text) { return parse_rational(text); }

// Random dyadic in [0, 1] with denominator 2^bits.
inline Rational random_unit(std::mt19937_64& rng, unsigned bits = 6) {
    std::uniform_int_distribution<unsigned long> pick(0, 1ul << bits);
    return Rational(pick(rng), 1ul << bits);
}

}  // namespace wmd::test
