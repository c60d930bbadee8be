#include "wmd/covers.hpp"

#include "wmd/error.hpp"
#include "wmd/tower_io.hpp"

namespace wmd {

using nlohmann::json;

namespace {

CoordLabel coord_field(const json& node, const std::string& path) {
    if (!node.is_array() || node.size() != 2 || !node[0].is_number_integer() || !node[1].is_number_integer())
        throw ConfigError(path, "expected a coordinate [m, c]");
    return CoordLabel{node[0].get<long>(), node[1].get<int>()};
}

}  // namespace

BoxCover parse_cover(const json& doc, const std::string& path) {
    if (!doc.is_object()) throw ConfigError(path, "expected an object");
    Ambient ambient;
    if (doc.contains("level")) {
        if (!doc["level"].is_number_unsigned()) throw ConfigError(path + ".level", "expected a nonnegative integer");
        ambient.level = doc["level"].get<std::size_t>();
    }
    if (!doc.contains("ambient") || !doc["ambient"].is_array()) throw ConfigError(path + ".ambient", "expected an array");
    for (std::size_t i = 0; i < doc["ambient"].size(); ++i)
        ambient.coords.push_back(coord_field(doc["ambient"][i], path + ".ambient[" + std::to_string(i) + "]"));
    std::sort(ambient.coords.begin(), ambient.coords.end());
    if (std::adjacent_find(ambient.coords.begin(), ambient.coords.end()) != ambient.coords.end())
        throw ConfigError(path + ".ambient", "duplicate coordinate");

    if (!doc.contains("members") || !doc["members"].is_array()) throw ConfigError(path + ".members", "expected an array");
    std::vector<Box> members;
    for (std::size_t i = 0; i < doc["members"].size(); ++i) {
        const std::string mpath = path + ".members[" + std::to_string(i) + "]";
        const auto& node = doc["members"][i];
        if (!node.is_array()) throw ConfigError(mpath, "expected an array of sides");
        Box box;
        box.sides.assign(ambient.dimension(), Interval::whole());
        for (std::size_t s = 0; s < node.size(); ++s) {
            const std::string spath = mpath + "[" + std::to_string(s) + "]";
            const auto& side = node[s];
            if (!side.is_object() || !side.contains("coord") || !side.contains("lo") || !side.contains("hi"))
                throw ConfigError(spath, "expected {coord, lo, hi}");
            auto axis = ambient.index(coord_field(side["coord"], spath + ".coord"));
            if (!axis) throw ConfigError(spath + ".coord", "coordinate is not an ambient axis");
            box.sides[*axis] = Interval{rational_field(side["lo"], spath + ".lo"), rational_field(side["hi"], spath + ".hi")};
            if (!(box.sides[*axis].lo < box.sides[*axis].hi)) throw ConfigError(spath, "lo must be below hi");
        }
        members.push_back(std::move(box));
    }
    return BoxCover(std::move(ambient), std::move(members));
}

BoxCover load_cover(const std::string& file) { return parse_cover(parse_json_document(read_text_file(file))); }

std::vector<BoxCover> load_level_covers(const std::string& file) {
    const json doc = parse_json_document(read_text_file(file));
    if (!doc.is_object() || !doc.contains("covers") || !doc["covers"].is_array())
        throw ConfigError("$.covers", "expected an array of covers");
    std::vector<BoxCover> out;
    for (std::size_t i = 0; i < doc["covers"].size(); ++i)
        out.push_back(parse_cover(doc["covers"][i], "$.covers[" + std::to_string(i) + "]"));
    return out;
}

json cover_to_json(const BoxCover& cover) {
    json doc;
    doc["level"] = cover.ambient().level;
    doc["ambient"] = json::array();
    for (const auto& c : cover.ambient().coords) doc["ambient"].push_back({c.m, c.c});
    doc["members"] = json::array();
    for (const auto& b : cover.members()) {
        json sides = json::array();
        for (std::size_t d = 0; d < b.sides.size(); ++d) {
            if (b.sides[d].spans()) continue;
            const auto& c = cover.ambient().coords[d];
            sides.push_back({{"coord", {c.m, c.c}}, {"lo", to_string(b.sides[d].lo)}, {"hi", to_string(b.sides[d].hi)}});
        }
        doc["members"].push_back(sides);
    }
    return doc;
}

}  // namespace wmd
