#pragma once

#include "wmd/tower.hpp"

#include <json.hpp>

#include <string>

namespace wmd {

// Tower config document:
//   {
//     "levels":  [ {"kind": "full", "alphabet": 4}
//                | {"kind": "sft", "transitions": [[1,1],[1,0]]}
//                | {"kind": "cube", "components": 2, "period": 0} ],
//     "factors": [ {"kind": "merge", "map": [0,0,1,1]} | {"kind": "project", "keep": 1} ],
//     "weights": ["1", "1/2"]
//   }
// Syntax errors report the line; schema errors report the JSON path of the field.
Tower parse_tower(const std::string& text);
Tower load_tower(const std::string& path);
nlohmann::json tower_to_json(const Tower& tower);

// Shared helpers for the other document readers.
nlohmann::json parse_json_document(const std::string& text);
std::string read_text_file(const std::string& path);
Rational rational_field(const nlohmann::json& node, const std::string& path);

}  // namespace wmd
