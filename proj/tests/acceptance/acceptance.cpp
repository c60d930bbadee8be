// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include "generators.hpp"

#include "wmd/cli.hpp"
#include "wmd/counting.hpp"
#include "wmd/covers.hpp"
#include "wmd/example51.hpp"
#include "wmd/invariants.hpp"
#include "wmd/ocap.hpp"
#include "wmd/parallel.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

using namespace wmd;
using namespace wmd::test;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    double budget_ms = 0;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (pass) detail = what;
        pass = false;
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_ms, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (o.budget_ms > 0) budget_ms = o.budget_ms;
    if (o.pass && ms > budget_ms) {
        o.pass = false;
        o.detail = "over time budget";
    }
    if (!o.pass) ++failures;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << title << "  [" << ms << " ms / "
         << budget_ms << " ms]";
    if (!o.detail.empty()) line << "  " << o.detail;
    std::cout << line.str() << std::endl;
}

BigInt fibonacci(long k) {
    BigInt a = 0;
    BigInt b = 1;
    for (long i = 0; i < k; ++i) {
        BigInt c = a + b;
        a = b;
        b = c;
    }
    return a;
}

std::string fixed(double v, int digits = 4) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

std::string run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = cli::run(args, out, err);
    return "status=" + std::to_string(status) + "\n" + out.str() + err.str();
}

// Everything the CLI reports for the criteria above, concatenated.
std::string digest(unsigned threads) {
    const std::string t = std::to_string(threads);
    std::string out;
    const std::vector<std::vector<std::string>> commands{
        {"windows", "--config", data("fullshift_4_2_half.json"), "--n", "1,2,3,4,5,6,7,8"},
        {"entropy", "--config", data("golden_trivial.json"), "--n", "1,2,4,8,12"},
        {"entropy", "--config", data("fullshift_4_2.json"), "--n", "1,2,4,8,16,32,64"},
        {"mmdim", "--config", data("fullshift_4_2.json"), "--n", "2,4,8", "--eps", "1/2,1/4,1/8,1/16"},
        {"count", "--config", data("cube_two_level.json"), "--n", "3", "--eps", "1/8", "--seed", "11"},
        {"cover-bounds", "--config", data("quadrant_cover.json")},
        {"cover-bounds", "--config", data("cube_generator_covers.json"), "--tower", data("cube_two_level.json"), "--n",
         "1,2,4,8"},
        {"ocap", "--config", data("golden_graph.json"), "--seed", "3"},
        {"example51", "--seed", "7"},
    };
    for (auto args : commands) {
        args.push_back("--threads");
        args.push_back(t);
        out += run_cli(args);
    }
    // library-level sweeps that fan out over the worker pool
    std::mt19937_64 rng(97);
    for (int i = 0; i < 10; ++i) {
        auto inst = random_sequences(rng, tower_file("cube_line.json"), 2, 12);
        auto b = spanning_number(inst, Rational(1, 4), CountMode::Greedy);
        out += to_string(b.lower) + "," + to_string(b.upper) + ";";
    }
    auto power = power_rule_probe(tower_file("golden_trivial.json"), 2, {1, 2, 3, 4, 5, 6, 7, 8});
    for (const auto& r : power.rows) out += r.deviation.to_string() + "|" + r.gap.to_string() + ";";
    return out;
}

}  // namespace

int main() {
    set_worker_threads(1);

    // Loaded up front so the timed region only covers the arithmetic.
    const auto table = nlohmann::json::parse(read_text_file(data("windows_table.json")));
    criterion(1, "window arithmetic on the 50-case table", 1.0, [&] {
        Outcome o;
        std::size_t cases = 0;
        for (const auto& c : table["cases"]) {
            std::vector<Rational> w;
            for (const auto& e : c["weights"]) w.push_back(parse_rational(e.get<std::string>()));
            const auto got = window_lengths(WeightVector(w), c["n"].get<long>());
            o.require(got == c["windows"].get<std::vector<long>>(), "mismatch at case " + std::to_string(cases));
            ++cases;
        }
        o.require(cases == 50, "table has " + std::to_string(cases) + " cases");
        o.detail = o.pass ? std::to_string(cases) + " cases exact" : o.detail;
        return o;
    });

    criterion(2, "two-level cube tower, faithful cover formula and slope 4", 5000.0, [] {
        Outcome o;
        const Tower t = two_level_cube_tower();
        std::vector<Rational> eps_list;
        for (long e = 2; e <= 6; ++e) eps_list.push_back(pow2(-e));
        const std::vector<long> ns{2, 4, 8, 16};
        int checked = 0;
        for (long n : ns)
            for (const auto& eps : eps_list) {
                const auto cover = cube_cover_count(t, n, eps, CoverMode::Faithful);
                const long l = to_long(floor_of(Rational(4) / eps));
                long pad = 0;
                while ((2L << pad) <= l) ++pad;  // floor(log2(4/eps))
                const BigInt base = 1 + floor_of(Rational(12) / eps);
                const BigInt formula = pow(base, static_cast<unsigned long>(4 * n + 4 * pad + 2));
                o.require(cover.count.upper == formula,
                          "count differs at n=" + std::to_string(n) + " eps=" + to_string(eps));
                o.require(cover.certified, "uncertified cover at n=" + std::to_string(n) + " eps=" + to_string(eps));
                ++checked;
            }
        const auto slopes = mmdim_estimate(t, eps_list, ns, SMode::Faithful);
        o.require(std::fabs(slopes.slope_upper_data - 4.0) <= 0.15,
                  "faithful slope " + fixed(slopes.slope_upper_data));
        if (o.pass)
            o.detail = std::to_string(checked) + " counts exact, faithful slope " + fixed(slopes.slope_upper_data);
        return o;
    });

    criterion(3, "two-level cube tower audit and certified bracket [2.85, 3.15]", 10000.0, [] {
        Outcome o;
        BenchmarkOptions options;
        const auto report = run_cube_benchmark(options);
        o.require(!report.audit.ok, "no counterexample in the claimed family");
        o.require(report.audit.distance.hi < options.counterexample_eps, "counterexample enclosure reaches eps");
        o.require(!report.pair_audit.ok, "pairwise check disagrees with the grid audit");
        const auto& br = report.audited_slopes;
        o.require(br.all_certified, "uncertified cells in the bracket");
        o.require(br.slope_lo >= 2.85 && br.slope_hi <= 3.15,
                  "bracket [" + fixed(br.slope_lo) + ", " + fixed(br.slope_hi) + "]");
        const auto text = render_benchmark(report, options);
        o.require(text.find("claimed_value=4") != std::string::npos, "report lacks the claimed value");
        o.require(text.find("audited_bracket=[") != std::string::npos, "report lacks the audited bracket");
        if (o.pass)
            o.detail = "counterexample at m=" + std::to_string(report.audit.coord.m) +
                       ",c=" + std::to_string(report.audit.coord.c) + " d=" + to_string(report.audit.distance.hi) +
                       ", bracket [" + fixed(br.slope_lo) + ", " + fixed(br.slope_hi) + "]" +
                       (br.crossed ? " (data slopes crossed)" : "");
        return o;
    });

    criterion(4, "weighted entropy closed forms", 2000.0, [] {
        Outcome o;
        std::vector<long> ns;
        for (long n = 1; n <= 64; ++n) ns.push_back(n);
        const auto full = entropy_estimate(tower_file("fullshift_4_2.json"), ns);
        for (const auto& r : full.rows)
            o.require(r.value == LogValue::log(BigInt(8)), "full shift value at n=" + std::to_string(r.n));
        std::vector<long> even;
        for (long n = 2; n <= 64; n += 2) even.push_back(n);
        const auto half = entropy_estimate(tower_file("fullshift_4_2_half.json"), even);
        for (const auto& r : half.rows)
            o.require(r.value == LogValue::scaled_log(Rational(5, 2), BigInt(2)),
                      "half-weight value at n=" + std::to_string(r.n));
        const Tower golden = tower_file("golden_trivial.json");
        std::vector<long> small;
        for (long n = 1; n <= 12; ++n) small.push_back(n);
        const auto g = entropy_estimate(golden, small);
        for (const auto& r : g.rows) {
            o.require(r.value == LogValue::log(fibonacci(r.n + 2)) * Rational(1, r.n),
                      "golden value at n=" + std::to_string(r.n));
            o.require(itinerary_count_bruteforce(golden, r.windows, std::uint64_t{1} << 24) == r.count,
                      "enumeration differs at n=" + std::to_string(r.n));
        }
        if (o.pass) o.detail = "64 + 32 + 12 rows exact";
        return o;
    });

    criterion(5, "orbit capacity, Karp against enumeration", 2000.0, [] {
        Outcome o;
        std::mt19937_64 rng(2024);
        for (int i = 0; i < 200; ++i) {
            const auto g = random_graph(rng, 6);
            o.require(orbit_capacity(g) == orbit_capacity_bruteforce(g, g.vertices), "graph " + std::to_string(i));
        }
        o.require(orbit_capacity(load_graph(data("golden_graph.json"))) == Rational(1, 2), "golden mean capacity");
        if (o.pass) o.detail = "200 graphs equal, golden mean 1/2";
        return o;
    });

    criterion(6, "cover combinatorics", 5000.0, [] {
        Outcome o;
        std::mt19937_64 rng(606);
        for (int i = 0; i < 100; ++i) {
            const auto c = random_interval_cover(rng, {0, 0});
            bool whole = false;
            for (const auto& b : c.members()) whole = whole || b.whole();
            const auto d = d_bounds(c);
            const std::size_t rule = whole ? 1 : 2;
            o.require(d.lower == rule && d.upper == rule, "1-D cover " + std::to_string(i));
        }
        const auto quad = d_bounds(load_cover(data("quadrant_cover.json")));
        o.require(quad.lower == 3 && quad.upper == 3, "quadrant cover");
        for (int i = 0; i < 50; ++i) {
            const auto a = random_interval_cover(rng, {0, 0});
            const auto b = random_interval_cover(rng, i % 2 ? CoordLabel{0, 0} : CoordLabel{1, 0});
            const auto j = d_bounds(join(a, b));
            o.require(j.exact(), "join bounds not exact for pair " + std::to_string(i));
            o.require(j.upper <= d_bounds(a).lower + d_bounds(b).lower, "subadditivity, pair " + std::to_string(i));
        }
        if (o.pass) o.detail = "100 covers follow the rule, quadrant (3,3), 50 pairs subadditive";
        return o;
    });

    criterion(7, "counting sandwiches", 5000.0, [] {
        Outcome o;
        std::mt19937_64 rng(707);
        const Tower line = tower_file("cube_line.json");
        for (int i = 0; i < 100; ++i) {
            const auto inst = i % 2 ? random_plane(rng, 12) : random_sequences(rng, line, 2, 12);
            const Rational eps(1 + i % 5, 16);
            const BigInt span = *spanning_number(inst, eps, CountMode::Exact).exact;
            const BigInt pack = *packing_number(inst, eps, CountMode::Exact).exact;
            const BigInt pack2 = *packing_number(inst, eps * 2, CountMode::Exact).exact;
            o.require(pack2 <= span && span <= pack, "sandwich, instance " + std::to_string(i));
            const auto gs = spanning_number(inst, eps, CountMode::Greedy);
            const auto gp = packing_number(inst, eps, CountMode::Greedy);
            o.require(gs.lower <= span && span <= gs.upper, "greedy spanning, instance " + std::to_string(i));
            o.require(gp.lower <= pack && pack <= gp.upper, "greedy packing, instance " + std::to_string(i));
        }
        if (o.pass) o.detail = "100 instances";
        return o;
    });

    criterion(8, "power rule for T^2", 5000.0, [] {
        Outcome o;
        const auto full = power_rule_probe(tower_file("fullshift_4_2.json"), 2, {1, 2, 3, 4, 5, 6, 7, 8});
        for (const auto& r : full.rows) {
            o.require(r.deviation.is_zero() && r.gap.is_zero(), "full shift at n=" + std::to_string(r.n));
            o.require(r.recode_matches, "recode count at n=" + std::to_string(r.n));
        }
        const auto golden = power_rule_probe(tower_file("golden_trivial.json"), 2, {1, 2, 3, 4, 5, 6, 7, 8});
        for (const auto& r : golden.rows) {
            o.require(r.within_gap, "golden deviation above gap at n=" + std::to_string(r.n));
            o.require(r.recode_matches, "golden recode count at n=" + std::to_string(r.n));
        }
        o.require(golden.gaps_shrinking, "golden gaps not shrinking");
        if (o.pass) o.detail = "full shift deviation 0, golden max deviation " + fixed(golden.max_deviation.to_double(), 6);
        return o;
    });

    criterion(9, "mean dimension consistency", 30000.0, [] {
        Outcome o;
        const Tower t = two_level_cube_tower();
        const auto covers = load_level_covers(data("cube_generator_covers.json"));
        const auto est = mdim_upper_estimate(t, covers, {1, 2, 4, 8});
        BenchmarkOptions options;
        const auto bracket = mmdim_estimate(t, options.audit_eps, options.audit_n, SMode::Tight);
        o.require(est.trend <= bracket.slope_hi + 0.2,
                  "trend " + fixed(est.trend) + " above slope_hi " + fixed(bracket.slope_hi));
        std::vector<Tower> symbolic{tower_file("fullshift_4_2.json"), tower_file("fullshift_4_2_half.json"),
                                    tower_file("golden_trivial.json"), tower_file("identity_full2.json")};
        std::mt19937_64 rng(909);
        while (symbolic.size() < 24) {
            Tower r = random_symbolic_tower(rng);
            if (r.windows(4).back() <= 24) symbolic.push_back(r);
        }
        std::vector<Rational> eps;
        for (long e = 1; e <= 5; ++e) eps.push_back(pow2(-e));
        std::size_t index = 0;
        for (const auto& s : symbolic) {
            const auto r = mmdim_estimate(s, eps, {1, 2, 4});
            o.require(r.slope_lo <= 0.0 && 0.0 <= r.slope_hi && r.slope_hi - r.slope_lo <= 0.05,
                      "symbolic bracket, tower " + std::to_string(index));
            o.require(r.entropy_bound && std::isfinite(r.entropy_bound->to_double()),
                      "entropy bound, tower " + std::to_string(index));
            ++index;
        }
        if (o.pass)
            o.detail = "trend " + fixed(est.trend) + " <= " + fixed(bracket.slope_hi) + " + 0.2; " +
                       std::to_string(symbolic.size()) + " symbolic towers bracket 0";
        return o;
    });

    criterion(10, "determinism across 1, 2, 8 threads and repeated runs", 60000.0, [] {
        Outcome o;
        const std::string base = digest(1);
        o.require(digest(2) == base, "2 threads differ");
        o.require(digest(8) == base, "8 threads differ");
        o.require(digest(1) == base, "second run differs");
        set_worker_threads(1);
        if (o.pass) o.detail = std::to_string(base.size()) + " bytes identical";
        return o;
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
