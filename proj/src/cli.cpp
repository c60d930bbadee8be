#include "wmd/cli.hpp"

#include "wmd/counting.hpp"
#include "wmd/covers.hpp"
#include "wmd/error.hpp"
#include "wmd/example51.hpp"
#include "wmd/invariants.hpp"
#include "wmd/ocap.hpp"
#include "wmd/parallel.hpp"
#include "wmd/tower_io.hpp"
#include "wmd/wmetric.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace wmd::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string config;
    std::string out;
    std::string points;
    std::string tower;
    std::string mode = "tight";
    std::string n_text;
    std::string eps_text;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

const std::vector<std::string> kCommands{"validate", "windows", "distance", "count", "entropy",
                                         "mmdim", "cover-bounds", "ocap", "example51"};

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<long> parse_n_list(const std::string& text) {
    if (text.empty()) throw ConfigError("--n", "missing n list");
    std::vector<long> out;
    for (const auto& item : split(text)) {
        long v = 0;
        auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || end != item.data() + item.size() || v < 1)
            throw ConfigError("--n", "expected positive integers, got \"" + item + "\"");
        if (!out.empty() && v <= out.back()) throw ConfigError("--n", "n list must be strictly increasing");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--n", "missing n list");
    return out;
}

std::vector<Rational> parse_eps_list(const std::string& text) {
    if (text.empty()) throw ConfigError("--eps", "missing eps list");
    std::vector<Rational> out;
    for (const auto& item : split(text)) {
        Rational v;
        try {
            v = parse_rational(item);
        } catch (const ConfigError& e) {
            throw ConfigError("--eps", e.what());
        }
        if (v <= 0) throw ConfigError("--eps", "eps values must be positive");
        if (!out.empty() && v >= out.back()) throw ConfigError("--eps", "eps list must be strictly decreasing");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--eps", "missing eps list");
    return out;
}

long single_n(const Options& o) {
    auto ns = parse_n_list(o.n_text);
    if (ns.size() != 1) throw ConfigError("--n", "this command takes a single n");
    return ns.front();
}

Rational single_eps(const Options& o) {
    auto es = parse_eps_list(o.eps_text);
    if (es.size() != 1) throw ConfigError("--eps", "this command takes a single eps");
    return es.front();
}

void require_dyadic(const std::vector<Rational>& eps) {
    for (const auto& e : eps)
        if (!is_dyadic(e)) throw ValidationError("eps values must be dyadic, got " + to_string(e));
}

json rational_json(const Rational& r) { return json{{"exact", to_string(r)}, {"decimal", to_decimal(r)}}; }
json log_json(const LogValue& v) { return json{{"exact", v.to_string()}, {"decimal", to_decimal(v.to_double())}}; }

json bounds_json(const CountBounds& b) {
    json j{{"lower", to_string(b.lower)}, {"upper", to_string(b.upper)}, {"log_lower", log_json(b.log_lower())},
           {"log_upper", log_json(b.log_upper())}};
    j["exact"] = b.exact ? json(to_string(*b.exact)) : json(nullptr);
    return j;
}

json interval_json(const DistanceInterval& d) {
    return json{{"lo", rational_json(d.lo)}, {"hi", rational_json(d.hi)}, {"exact", d.exact()}};
}

// {"points": [{"radius": W, "tail": "zero"|"unknown", "values": [["p/q", ...], ...]} | {..., "symbols": [...]}]}
std::vector<PointWindow> load_points(const std::string& path) {
    const json doc = parse_json_document(read_text_file(path));
    if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array())
        throw ConfigError("$.points", "expected an array of points");
    std::vector<PointWindow> out;
    for (std::size_t i = 0; i < doc["points"].size(); ++i) {
        const std::string at = "$.points[" + std::to_string(i) + "]";
        const auto& p = doc["points"][i];
        if (!p.is_object() || !p.contains("radius") || !p["radius"].is_number_integer())
            throw ConfigError(at + ".radius", "expected an integer radius");
        const long radius = p["radius"].get<long>();
        Tail tail = Tail::Zero;
        if (p.contains("tail")) {
            const std::string t = p["tail"].is_string() ? p["tail"].get<std::string>() : "";
            if (t == "unknown") tail = Tail::Unknown;
            else if (t != "zero") throw ConfigError(at + ".tail", "expected \"zero\" or \"unknown\"");
        }
        try {
            if (p.contains("symbols")) {
                if (!p["symbols"].is_array()) throw ConfigError(at + ".symbols", "expected an array of integers");
                std::vector<int> symbols;
                for (const auto& s : p["symbols"]) {
                    if (!s.is_number_integer()) throw ConfigError(at + ".symbols", "expected integers");
                    symbols.push_back(s.get<int>());
                }
                out.push_back(PointWindow::symbolic(radius, std::move(symbols), tail));
            } else if (p.contains("values")) {
                if (!p["values"].is_array()) throw ConfigError(at + ".values", "expected an array of rows");
                std::vector<std::vector<Rational>> rows;
                for (std::size_t r = 0; r < p["values"].size(); ++r) {
                    const auto& row = p["values"][r];
                    const std::string rat = at + ".values[" + std::to_string(r) + "]";
                    if (!row.is_array()) throw ConfigError(rat, "expected an array of rationals");
                    std::vector<Rational> vals;
                    for (std::size_t c = 0; c < row.size(); ++c)
                        vals.push_back(rational_field(row[c], rat + "[" + std::to_string(c) + "]"));
                    rows.push_back(std::move(vals));
                }
                out.push_back(PointWindow::cube(radius, std::move(rows), tail));
            } else {
                throw ConfigError(at, "expected \"symbols\" or \"values\"");
            }
        } catch (const DomainError& e) {
            throw ConfigError(at, e.what());
        }
    }
    return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string windows_csv(const Tower& tower, const std::vector<long>& ns) {
    std::ostringstream os;
    os << "n";
    for (std::size_t i = 0; i < tower.depth(); ++i) os << ",L_" << i + 1;
    os << "\n";
    for (long n : ns) {
        os << n;
        for (long w : tower.windows(n)) os << "," << w;
        os << "\n";
    }
    return os.str();
}

std::string cmd_validate(const Options& o, int& status) {
    const Tower tower = load_tower(o.config);
    const auto report = validate_tower(tower);
    json j{{"ok", report.ok()}, {"violations", report.violations}, {"notes", report.notes}, {"depth", tower.depth()}};
    j["kind"] = tower.kind() == TowerKind::Symbolic ? "symbolic" : tower.kind() == TowerKind::Cube ? "cube" : "mixed";
    status = report.ok() ? kOk : kInvalid;
    return dump(j);
}

std::string cmd_windows(const Options& o) {
    const Tower tower = load_tower(o.config);
    require_valid(tower);
    return windows_csv(tower, parse_n_list(o.n_text));
}

std::string cmd_distance(const Options& o) {
    const Tower tower = load_tower(o.config);
    const long n = single_n(o);
    if (o.points.empty()) throw ConfigError("--points", "distance needs a points file");
    const auto points = load_points(o.points);
    std::optional<Rational> eps;
    if (!o.eps_text.empty()) eps = single_eps(o);
    json pairs = json::array();
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const auto d = bowen_distance(tower, points[i], points[j], n);
            json entry{{"i", i}, {"j", j}, {"distance", interval_json(d)}};
            if (eps) {
                const auto m = classify_below(d, *eps);
                entry["below_eps"] = m == Membership::Inside ? "yes" : m == Membership::Outside ? "no" : "unresolved";
            }
            pairs.push_back(entry);
        }
    return dump(json{{"n", n}, {"pairs", pairs}});
}

std::string cmd_count(const Options& o) {
    const Tower tower = load_tower(o.config);
    require_valid(tower);
    const long n = single_n(o);
    const Rational eps = single_eps(o);
    json j{{"n", n}, {"eps", rational_json(eps)}};
    if (!o.points.empty()) {
        const auto instance = FiniteMetricInstance::from_points(tower, n, load_points(o.points));
        j["points"] = instance.size();
        j["spanning"] = bounds_json(spanning_number(instance, eps, CountMode::Exact));
        j["packing"] = bounds_json(packing_number(instance, eps, CountMode::Exact));
        // centers anywhere in X_1: a 2eps-separated subset needs one center per point
        j["spanning_free_lower"] = to_string(packing_number(instance, eps * 2, CountMode::Exact).lower);
        return dump(j);
    }
    if (tower.is_symbolic()) {
        long margin = 0;
        while (pow2(-(margin + 1)) >= eps) ++margin;
        j["margin"] = margin;
        j["itinerary"] = bounds_json(eps > 1 ? CountBounds::of_exact(1) : itinerary_count(tower, n, margin));
        return dump(j);
    }
    if (o.mode != "faithful" && o.mode != "tight") throw ConfigError("--mode", "expected faithful or tight");
    const auto cover = cube_cover_count(tower, n, eps, o.mode == "faithful" ? CoverMode::Faithful : CoverMode::Tight,
                                        o.seed);
    j["cover"] = json{{"mode", o.mode},
                      {"pad", cover.pad},
                      {"base", to_string(cover.base)},
                      {"exponent", cover.exponent},
                      {"log_count", log_json(LogValue::scaled_log(Rational(cover.exponent), cover.base))},
                      {"cell_diameter", rational_json(cover.cell_diameter)},
                      {"certified", cover.certified},
                      {"samples", cover.samples}};
    const auto grid = cube_packing_grid(tower, n, eps);
    j["packing"] = json{{"coordinates", grid.family.coords.size()},
                        {"spacing", rational_json(grid.family.spacing)},
                        {"values", grid.family.values},
                        {"log_count", log_json(grid.count.log_lower())},
                        {"certified", grid.certified}};
    return dump(j);
}

std::string cmd_entropy(const Options& o) {
    const Tower tower = load_tower(o.config);
    const auto est = entropy_estimate(tower, parse_n_list(o.n_text));
    std::ostringstream os;
    os << "n,windows,count,value,value_decimal,cauchy_gap,cauchy_gap_decimal\n";
    for (const auto& r : est.rows) {
        os << r.n << ",";
        for (std::size_t i = 0; i < r.windows.size(); ++i) os << (i ? " " : "") << r.windows[i];
        os << "," << to_string(r.count) << "," << r.value.to_string() << "," << to_decimal(r.value.to_double()) << ",";
        if (r.cauchy_gap) os << r.cauchy_gap->to_string() << "," << to_decimal(r.cauchy_gap->to_double());
        else os << ",";
        os << "\n";
    }
    os << "\nquantity,exact,decimal\n";
    os << "extrapolated," << est.extrapolated.to_string() << "," << to_decimal(est.extrapolated.to_double()) << "\n";
    os << "upper_bound," << est.upper_bound.to_string() << "," << to_decimal(est.upper_bound.to_double()) << "\n";
    if (est.closed_form) {
        os << "closed_form," << est.closed_form->to_string() << "," << to_decimal(est.closed_form->to_double()) << "\n";
        os << "closed_form_gap," << est.closed_form_gap->to_string() << ","
           << to_decimal(est.closed_form_gap->to_double()) << "\n";
    }
    return os.str();
}

SMode parse_mode(const std::string& mode) {
    if (mode == "faithful") return SMode::Faithful;
    if (mode == "tight") return SMode::Tight;
    throw ConfigError("--mode", "expected faithful or tight");
}

std::string cmd_mmdim(const Options& o) {
    const Tower tower = load_tower(o.config);
    const auto eps = parse_eps_list(o.eps_text);
    require_dyadic(eps);
    return mmdim_csv(mmdim_estimate(tower, eps, parse_n_list(o.n_text), parse_mode(o.mode), o.seed));
}

json dbounds_json(const DBounds& d) {
    return json{{"lower", d.lower},   {"upper", d.upper}, {"exact", d.exact()}, {"weak", d.weak},
                {"brick_certified", d.brick_certified}, {"free_axes", d.spanning_free}, {"essential_axes", d.essential}};
}

std::string cmd_cover_bounds(const Options& o) {
    const json doc = parse_json_document(read_text_file(o.config));
    if (doc.is_object() && doc.contains("covers")) {
        if (o.tower.empty()) throw ConfigError("--tower", "level covers need a tower file");
        const Tower tower = load_tower(o.tower);
        const auto covers = load_level_covers(o.config);
        const auto est = mdim_upper_estimate(tower, covers, parse_n_list(o.n_text));
        std::ostringstream os;
        os << "n,dimension,d_lower,d_upper,ratio\n";
        for (const auto& r : est.rows)
            os << r.n << "," << r.dimension << "," << r.bounds.lower << "," << r.bounds.upper << ","
               << to_decimal(r.ratio) << "\n";
        os << "\ntrend,last\n" << to_decimal(est.trend) << "," << to_decimal(est.last) << "\n";
        return os.str();
    }
    const BoxCover cover = parse_cover(doc);
    json j{{"dimension", cover.ambient().dimension()},
           {"members", cover.size()},
           {"ord", ord(cover)},
           {"mesh_sup", rational_json(mesh_sup(cover))},
           {"d_bounds", dbounds_json(d_bounds(cover))}};
    if (!o.tower.empty()) {
        const Tower tower = load_tower(o.tower);
        j["mesh_bowen"] = rational_json(mesh_bowen(cover, tower, single_n(o)));
    }
    return dump(j);
}

std::string cmd_ocap(const Options& o) {
    const SftGraph graph = load_graph(o.config);
    const Rational cap = orbit_capacity(graph);
    json j{{"vertices", graph.vertices}, {"E", graph.marked_list()}, {"ocap", rational_json(cap)},
           {"small", cap == 0}};
    if (graph.vertices <= 10) j["bruteforce"] = rational_json(orbit_capacity_bruteforce(graph, graph.vertices));
    const auto bracket = orbit_capacity_bracket(graph, 64, 64, o.seed);
    j["sampled_bracket"] = json{{"lower", rational_json(bracket.lower)}, {"upper", rational_json(bracket.upper)}};
    return dump(j);
}

std::string cmd_example51(const Options& o) {
    BenchmarkOptions options;
    if (!o.n_text.empty()) options.faithful_n = parse_n_list(o.n_text);
    if (!o.eps_text.empty()) {
        options.faithful_eps = parse_eps_list(o.eps_text);
        require_dyadic(options.faithful_eps);
    }
    options.seed = o.seed;
    return render_benchmark(run_cube_benchmark(options), options);
}

int dispatch(const std::string& command, const Options& o, std::ostream& out) {
    int status = kOk;
    std::string text;
    if (command == "validate") text = cmd_validate(o, status);
    else if (command == "windows") text = cmd_windows(o);
    else if (command == "distance") text = cmd_distance(o);
    else if (command == "count") text = cmd_count(o);
    else if (command == "entropy") text = cmd_entropy(o);
    else if (command == "mmdim") text = cmd_mmdim(o);
    else if (command == "cover-bounds") text = cmd_cover_bounds(o);
    else if (command == "ocap") text = cmd_ocap(o);
    else text = cmd_example51(o);
    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream file(o.out, std::ios::binary);
        if (!file) throw ConfigError("--out", "cannot write " + o.out);
        file << text;
    }
    return status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty() || std::find(kCommands.begin(), kCommands.end(), args.front()) == kCommands.end()) {
        err << "usage: wmdim <command> [options]\ncommands:";
        for (const auto& c : kCommands) err << " " << c;
        err << "\n";
        if (!args.empty() && (args.front() == "--help" || args.front() == "-h")) return kOk;
        if (!args.empty()) err << "unknown command: " << args.front() << "\n";
        return kUsage;
    }
    const std::string command = args.front();
    Options o;
    CLI::App app{"weighted dynamical invariants", "wmdim " + command};
    app.add_option("--config", o.config, "input document (tower, cover or graph JSON)");
    app.add_option("--n", o.n_text, "comma-separated n values");
    app.add_option("--eps", o.eps_text, "comma-separated rationals p/q");
    app.add_option("--mode", o.mode, "faithful | tight");
    app.add_option("--out", o.out, "write the report here instead of stdout");
    app.add_option("--seed", o.seed, "seed for sampled certifications");
    app.add_option("--points", o.points, "points JSON for distance/count");
    app.add_option("--tower", o.tower, "tower JSON for cover-bounds");
    app.add_option("--threads", o.threads, "worker threads (results do not depend on it)");

    std::vector<std::string> argv_store{"wmdim " + command};
    argv_store.insert(argv_store.end(), args.begin() + 1, args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    const bool needs_config = command != "example51";
    try {
        if (needs_config && o.config.empty()) throw ConfigError("--config", "missing input document");
        if (o.threads > 0) set_worker_threads(o.threads);
        return dispatch(command, o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const UnresolvedComparison& e) {
        err << "unresolved: " << e.what() << "\n";
        return kUnresolved;
    } catch (const ValidationError& e) {
        err << "invalid: " << e.what() << "\n";
        return kInvalid;
    } catch (const DomainError& e) {
        err << "invalid: " << e.what() << "\n";
        return kInvalid;
    }
}

}  // namespace wmd::cli
