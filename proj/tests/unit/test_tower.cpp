#include "fixtures.hpp"

#include "wmd/error.hpp"

#include <doctest.h>

#include <json.hpp>

using namespace wmd;
using namespace wmd::test;

namespace {

bool has_violation(const ValidationReport& r, const std::string& needle) {
    for (const auto& v : r.violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_SUITE("tower") {

TEST_CASE("window_lengths small cases") {
    CHECK(window_lengths(WeightVector({1, 1}), 3) == std::vector<long>{3, 6});
    CHECK(window_lengths(WeightVector({1, Rational(1, 2)}), 3) == std::vector<long>{3, 5});
    CHECK(window_lengths(WeightVector({1, 0}), 4) == std::vector<long>{4, 4});
    CHECK(window_lengths(WeightVector({Rational(1, 3)}), 1) == std::vector<long>{1});
    CHECK_THROWS_AS(window_lengths(WeightVector({1}), 0), DomainError);
}

TEST_CASE("window_lengths matches the hand table") {
    auto doc = nlohmann::json::parse(read_text_file(data("windows_table.json")));
    REQUIRE(doc["cases"].size() == 50);
    for (const auto& c : doc["cases"]) {
        std::vector<Rational> w;
        for (const auto& e : c["weights"]) w.push_back(q(e.get<std::string>().c_str()));
        auto got = window_lengths(WeightVector(w), c["n"].get<long>());
        CHECK(got == c["windows"].get<std::vector<long>>());
        for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i - 1] <= got[i]);
    }
}

TEST_CASE("weight vector sign rules") {
    CHECK_THROWS_AS(WeightVector({0, 1}), ValidationError);
    CHECK_THROWS_AS(WeightVector({1, -1}), ValidationError);
    CHECK_THROWS_AS(WeightVector(std::vector<Rational>{}), ValidationError);
    CHECK_NOTHROW(WeightVector({Rational(1, 7), 0, 2}));
}

TEST_CASE("validate accepts the reference towers") {
    for (const char* name : {"identity_full2.json", "fullshift_4_2.json", "fullshift_4_2_half.json",
                             "golden_trivial.json", "cube_two_level.json"}) {
        CAPTURE(name);
        auto report = validate_tower(tower_file(name));
        CHECK(report.ok());
        CHECK(report.notes.empty());
    }
}

TEST_CASE("identity map into the golden mean shift is rejected") {
    auto report = validate_tower(tower_file("bad_factor.json"));
    CHECK_FALSE(report.ok());
    CHECK(has_violation(report, "transition 1->1 not allowed in target"));
    CHECK_THROWS_AS(require_valid(tower_file("bad_factor.json")), ValidationError);
}

TEST_CASE("structural violations are reported as data") {
    SUBCASE("merge map not onto") {
        Tower t({SymbolicSystem::full(2), SymbolicSystem::full(2)}, {ForgetfulFactor::merge({0, 0})},
                WeightVector({1, 1}));
        CHECK(has_violation(validate_tower(t), "not onto"));
    }
    SUBCASE("target transition never hit") {
        Tower t({SymbolicSystem::sft({{0, 1}, {1, 0}}), SymbolicSystem::full(2)}, {ForgetfulFactor::merge({0, 1})},
                WeightVector({1, 1}));
        CHECK(has_violation(validate_tower(t), "target transition 0->0 is not the image"));
    }
    SUBCASE("dead symbol") {
        Tower t({SymbolicSystem::sft({{1, 1}, {0, 0}})}, {}, WeightVector({1}));
        CHECK(has_violation(validate_tower(t), "symbol 1 has no successor"));
    }
    SUBCASE("projection keeps too much") {
        Tower t({CubeSystem{2, 0}, CubeSystem{1, 0}}, {ForgetfulFactor::project(2)}, WeightVector({1, 1}));
        CHECK(has_violation(validate_tower(t), "factor 1: keeps 2 components but target has 1"));
    }
    SUBCASE("counts disagree") {
        Tower t({CubeSystem{2, 0}, CubeSystem{1, 0}}, {ForgetfulFactor::project(1)}, WeightVector({1}));
        CHECK(has_violation(validate_tower(t), "expected 2 weights"));
    }
    SUBCASE("mixed tower") {
        Tower t({CubeSystem{1, 0}, SymbolicSystem::full(1)}, {ForgetfulFactor::project(1)}, WeightVector({1, 1}));
        CHECK(has_violation(validate_tower(t), "mixed"));
    }
}

TEST_CASE("single-level towers carry a note") {
    auto report = validate_tower(tower_file("cube_line.json"));
    CHECK(report.ok());
    REQUIRE(report.notes.size() == 1);
    CHECK(report.notes[0].find("k=1") != std::string::npos);
}

TEST_CASE("chain maps compose the factors") {
    Tower t({SymbolicSystem::full(4), SymbolicSystem::full(2), SymbolicSystem::full(1)},
            {ForgetfulFactor::merge({0, 0, 1, 1}), ForgetfulFactor::merge({0, 0})}, WeightVector({1, 1, 1}));
    CHECK(validate_tower(t).ok());
    CHECK(t.chain_symbol_map(1) == std::vector<int>{0, 0, 1, 1});
    CHECK(t.chain_symbol_map(2) == std::vector<int>{0, 0, 0, 0});
    CHECK(apply_chain(t, 1, {3, 0, 2}) == std::vector<int>{1, 0, 1});
    auto cube = tower_file("cube_two_level.json");
    CHECK(cube.visible_components(0) == 2);
    CHECK(cube.visible_components(1) == 1);
    CHECK_THROWS_AS(cube.symbolic(0), DomainError);
}

TEST_CASE("config documents round-trip") {
    auto t = tower_file("fullshift_4_2_half.json");
    auto again = parse_tower(tower_to_json(t).dump());
    CHECK(tower_to_json(again) == tower_to_json(t));
    CHECK(again.weights()[1] == Rational(1, 2));
}

TEST_CASE("config errors name the line or the field") {
    try {
        load_tower(data("malformed.json"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).rfind("line 3", 0) == 0);
    }
    try {
        parse_tower(R"({"levels": [{"kind": "full", "alphabet": 2}]})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "$.weights");
    }
    CHECK_THROWS_AS(parse_tower(R"({"levels": [{"kind": "torus"}], "weights": ["1"]})"), ConfigError);
    CHECK_THROWS_AS(parse_tower(R"({"levels": [{"kind": "full", "alphabet": 2}], "weights": ["x"]})"), ConfigError);
    CHECK_THROWS_AS(load_tower(data("does_not_exist.json")), ConfigError);
}

}
