#include "fixtures.hpp"

#include "wmd/cli.hpp"
#include "wmd/parallel.hpp"

#include <doctest.h>

#include <json.hpp>

#include <sstream>

using namespace wmd;
using namespace wmd::test;

namespace {

struct Run {
    int status = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.status = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("windows") {
    auto r = run({"windows", "--config", data("fullshift_4_2.json"), "--n", "3"});
    CHECK(r.status == cli::kOk);
    CHECK(r.out == "n,L_1,L_2\n3,3,6\n");
    auto half = run({"windows", "--config", data("fullshift_4_2_half.json"), "--n", "1,2,3"});
    CHECK(half.out == "n,L_1,L_2\n1,1,2\n2,2,3\n3,3,5\n");
}

TEST_CASE("entropy rows are exact") {
    auto r = run({"entropy", "--config", data("fullshift_4_2.json"), "--n", "1,2,4,8"});
    REQUIRE(r.status == cli::kOk);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,windows,count,value,value_decimal,cauchy_gap,cauchy_gap_decimal");
    int rows = 0;
    while (std::getline(lines, line) && !line.empty()) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() >= 4);
        CHECK(cells[3] == "log(8)");
        ++rows;
    }
    CHECK(rows == 4);
    CHECK(contains(r.out, "closed_form,log(8),"));
}

TEST_CASE("validate") {
    auto ok = run({"validate", "--config", data("cube_two_level.json")});
    CHECK(ok.status == cli::kOk);
    auto j = nlohmann::json::parse(ok.out);
    CHECK(j["ok"] == true);
    CHECK(j["kind"] == "cube");
    auto bad = run({"validate", "--config", data("bad_factor.json")});
    CHECK(bad.status == cli::kInvalid);
    CHECK(contains(bad.out, "transition 1->1 not allowed in target"));
}

TEST_CASE("count") {
    auto cube = run({"count", "--config", data("cube_two_level.json"), "--n", "2", "--eps", "1/4", "--mode", "faithful"});
    REQUIRE(cube.status == cli::kOk);
    auto j = nlohmann::json::parse(cube.out);
    CHECK(j["cover"]["exponent"] == 26);
    CHECK(j["cover"]["base"] == "49");
    CHECK(j["cover"]["certified"] == true);
    CHECK(j["cover"]["log_count"]["exact"] == "52*log(7)");
    auto sym = run({"count", "--config", data("fullshift_4_2.json"), "--n", "2", "--eps", "1"});
    CHECK(nlohmann::json::parse(sym.out)["itinerary"]["exact"] == "64");
    auto pts = run({"count", "--config", data("cube_line.json"), "--n", "1", "--eps", "3/5", "--points",
                    data("line_points.json")});
    REQUIRE(pts.status == cli::kOk);
    auto p = nlohmann::json::parse(pts.out);
    CHECK(p["spanning"]["exact"] == "1");
    CHECK(p["packing"]["exact"] == "2");
    CHECK(p["spanning_free_lower"] == "1");
}

TEST_CASE("distance") {
    auto r = run({"distance", "--config", data("cube_line.json"), "--n", "1", "--points", data("line_points.json"),
                  "--eps", "1/2"});
    REQUIRE(r.status == cli::kOk);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["pairs"].size() == 3);
    CHECK(j["pairs"][0]["distance"]["lo"]["exact"] == "1/2");
    CHECK(j["pairs"][0]["below_eps"] == "no");
    CHECK(j["pairs"][1]["distance"]["hi"]["exact"] == "1");
}

TEST_CASE("exit statuses") {
    CHECK(run({"frobnicate"}).status == cli::kUsage);
    CHECK(run({}).status == cli::kUsage);
    CHECK(run({"windows", "--bogus", "1"}).status == cli::kUsage);
    auto malformed = run({"windows", "--config", data("malformed.json"), "--n", "3"});
    CHECK(malformed.status == cli::kConfig);
    CHECK(contains(malformed.err, "line 3"));
    CHECK(run({"windows", "--config", data("fullshift_4_2.json"), "--n", "3,2"}).status == cli::kConfig);
    CHECK(run({"windows", "--config", data("bad_factor.json"), "--n", "3"}).status == cli::kInvalid);
    CHECK(run({"mmdim", "--config", data("fullshift_4_2.json"), "--n", "2", "--eps", "1/3,1/4,1/8,1/16"}).status ==
          cli::kInvalid);
    CHECK(run({"entropy", "--config", data("cube_two_level.json"), "--n", "2"}).status == cli::kInvalid);
    auto unresolved = run({"count", "--config", data("cube_line.json"), "--n", "1", "--eps", "1/4", "--points",
                           data("unresolved_points.json")});
    CHECK(unresolved.status == cli::kUnresolved);
    CHECK(run({"windows", "--n", "3"}).status == cli::kConfig);
}

TEST_CASE("cover-bounds") {
    auto r = run({"cover-bounds", "--config", data("quadrant_cover.json")});
    REQUIRE(r.status == cli::kOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["ord"] == 4);
    CHECK(j["d_bounds"]["lower"] == 3);
    CHECK(j["d_bounds"]["upper"] == 3);
    auto est = run({"cover-bounds", "--config", data("cube_generator_covers.json"), "--tower",
                    data("cube_two_level.json"), "--n", "1,2,4"});
    REQUIRE(est.status == cli::kOk);
    CHECK(contains(est.out, "n,dimension,d_lower,d_upper,ratio\n1,3,4,4,4\n"));
}

TEST_CASE("ocap") {
    auto r = run({"ocap", "--config", data("golden_graph.json")});
    REQUIRE(r.status == cli::kOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["ocap"]["exact"] == "1/2");
    CHECK(j["bruteforce"]["exact"] == "1/2");
    CHECK(j["small"] == false);
}

TEST_CASE("example51 report") {
    auto r = run({"example51", "--n", "2,4", "--eps", "1/4,1/8,1/16,1/32"});
    REQUIRE(r.status == cli::kOk);
    CHECK(contains(r.out, "n=2,eps=1/4,exponent=26"));
    CHECK(contains(r.out, "claimed_value=4"));
    CHECK(contains(r.out, "audited_bracket=["));
    CHECK(contains(r.out, "[separation audit]"));
}

TEST_CASE("output does not depend on the worker count") {
    std::vector<std::vector<std::string>> commands{
        {"mmdim", "--config", data("cube_two_level.json"), "--n", "2,4", "--eps", "1/4,1/8,1/16,1/32"},
        {"entropy", "--config", data("golden_trivial.json"), "--n", "1,2,3,4,5,6"},
        {"count", "--config", data("cube_two_level.json"), "--n", "3", "--eps", "1/8", "--seed", "5"},
    };
    for (const auto& base : commands) {
        std::string first;
        for (const char* threads : {"1", "2", "8"}) {
            auto args = base;
            args.push_back("--threads");
            args.push_back(threads);
            auto r = run(args);
            REQUIRE(r.status == cli::kOk);
            if (first.empty()) first = r.out;
            CHECK(r.out == first);
        }
    }
    set_worker_threads(1);
}

}
