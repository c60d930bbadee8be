#include "wmd/tower_io.hpp"

#include "wmd/error.hpp"

#include <fstream>
#include <sstream>

namespace wmd {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json parse_json_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        long line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        std::string what = e.what();
        // strip the library prefix "[json.exception.parse_error.101] "
        auto close = what.find("] ");
        if (close != std::string::npos) what = what.substr(close + 2);
        throw ConfigError("", what, line);
    }
}

Rational rational_field(const json& node, const std::string& path) {
    if (node.is_string()) {
        try {
            return parse_rational(node.get<std::string>());
        } catch (const ConfigError& e) {
            throw ConfigError(path, e.what());
        }
    }
    if (node.is_number_integer()) return Rational(BigInt(node.get<long>()));
    throw ConfigError(path, "expected a rational string \"p/q\"");
}

namespace {

const json& require(const json& node, const char* key, const std::string& path) {
    if (!node.is_object()) throw ConfigError(path, "expected an object");
    auto it = node.find(key);
    if (it == node.end()) throw ConfigError(path + "." + key, "missing field");
    return *it;
}

long int_field(const json& node, const std::string& path) {
    if (!node.is_number_integer()) throw ConfigError(path, "expected an integer");
    return node.get<long>();
}

System parse_level(const json& node, const std::string& path) {
    const auto& kind_node = require(node, "kind", path);
    if (!kind_node.is_string()) throw ConfigError(path + ".kind", "expected a string");
    const auto kind = kind_node.get<std::string>();
    if (kind == "full") {
        long q = int_field(require(node, "alphabet", path), path + ".alphabet");
        if (q < 1 || q > 4096) throw ConfigError(path + ".alphabet", "alphabet size must be in 1..4096");
        return SymbolicSystem::full(static_cast<int>(q));
    }
    if (kind == "sft") {
        const auto& rows = require(node, "transitions", path);
        const std::string rpath = path + ".transitions";
        if (!rows.is_array() || rows.empty()) throw ConfigError(rpath, "expected a nonempty square 0/1 matrix");
        std::vector<std::vector<std::uint8_t>> matrix;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string row_path = rpath + "[" + std::to_string(i) + "]";
            if (!rows[i].is_array() || rows[i].size() != rows.size())
                throw ConfigError(row_path, "expected a row of length " + std::to_string(rows.size()));
            std::vector<std::uint8_t> row;
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                long v = int_field(rows[i][j], row_path + "[" + std::to_string(j) + "]");
                if (v != 0 && v != 1) throw ConfigError(row_path + "[" + std::to_string(j) + "]", "expected 0 or 1");
                row.push_back(static_cast<std::uint8_t>(v));
            }
            matrix.push_back(std::move(row));
        }
        return SymbolicSystem::sft(std::move(matrix));
    }
    if (kind == "cube") {
        CubeSystem c;
        c.components = static_cast<int>(int_field(require(node, "components", path), path + ".components"));
        if (c.components < 1) throw ConfigError(path + ".components", "must be positive");
        if (node.contains("period")) c.period = int_field(node["period"], path + ".period");
        if (c.period < 0) throw ConfigError(path + ".period", "must be nonnegative");
        return c;
    }
    throw ConfigError(path + ".kind", "unknown level kind '" + kind + "' (expected full, sft or cube)");
}

ForgetfulFactor parse_factor(const json& node, const std::string& path) {
    const auto& kind_node = require(node, "kind", path);
    if (!kind_node.is_string()) throw ConfigError(path + ".kind", "expected a string");
    const auto kind = kind_node.get<std::string>();
    if (kind == "project") {
        return ForgetfulFactor::project(static_cast<int>(int_field(require(node, "keep", path), path + ".keep")));
    }
    if (kind == "merge") {
        const auto& map = require(node, "map", path);
        if (!map.is_array()) throw ConfigError(path + ".map", "expected an array of symbols");
        std::vector<int> out;
        for (std::size_t i = 0; i < map.size(); ++i)
            out.push_back(static_cast<int>(int_field(map[i], path + ".map[" + std::to_string(i) + "]")));
        return ForgetfulFactor::merge(std::move(out));
    }
    throw ConfigError(path + ".kind", "unknown factor kind '" + kind + "' (expected project or merge)");
}

}  // namespace

Tower parse_tower(const std::string& text) {
    json doc = parse_json_document(text);
    const auto& levels_node = require(doc, "levels", "$");
    if (!levels_node.is_array() || levels_node.empty()) throw ConfigError("$.levels", "expected a nonempty array");
    std::vector<System> levels;
    for (std::size_t i = 0; i < levels_node.size(); ++i)
        levels.push_back(parse_level(levels_node[i], "$.levels[" + std::to_string(i) + "]"));

    std::vector<ForgetfulFactor> factors;
    if (doc.contains("factors")) {
        const auto& fnode = doc["factors"];
        if (!fnode.is_array()) throw ConfigError("$.factors", "expected an array");
        for (std::size_t i = 0; i < fnode.size(); ++i)
            factors.push_back(parse_factor(fnode[i], "$.factors[" + std::to_string(i) + "]"));
    }

    const auto& wnode = require(doc, "weights", "$");
    if (!wnode.is_array()) throw ConfigError("$.weights", "expected an array of \"p/q\" strings");
    std::vector<Rational> weights;
    for (std::size_t i = 0; i < wnode.size(); ++i)
        weights.push_back(rational_field(wnode[i], "$.weights[" + std::to_string(i) + "]"));

    return Tower(std::move(levels), std::move(factors), WeightVector(std::move(weights)));
}

Tower load_tower(const std::string& path) { return parse_tower(read_text_file(path)); }

json tower_to_json(const Tower& tower) {
    json doc;
    doc["levels"] = json::array();
    for (const auto& level : tower.levels()) {
        if (const auto* s = std::get_if<SymbolicSystem>(&level)) {
            if (s->is_full()) {
                doc["levels"].push_back({{"kind", "full"}, {"alphabet", s->alphabet}});
            } else {
                json rows = json::array();
                for (const auto& row : s->transitions) {
                    json r = json::array();
                    for (auto v : row) r.push_back(static_cast<int>(v));
                    rows.push_back(r);
                }
                doc["levels"].push_back({{"kind", "sft"}, {"transitions", rows}});
            }
        } else {
            const auto& c = std::get<CubeSystem>(level);
            json node = {{"kind", "cube"}, {"components", c.components}};
            if (c.period > 0) node["period"] = c.period;
            doc["levels"].push_back(node);
        }
    }
    doc["factors"] = json::array();
    for (const auto& f : tower.factors()) {
        if (f.kind == ForgetfulFactor::Kind::Project) doc["factors"].push_back({{"kind", "project"}, {"keep", f.keep}});
        else doc["factors"].push_back({{"kind", "merge"}, {"map", f.symbol_map}});
    }
    doc["weights"] = json::array();
    for (const auto& w : tower.weights().entries()) doc["weights"].push_back(to_string(w));
    return doc;
}

}  // namespace wmd
