#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wmd::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInvalid = 2;     // validation failure or precondition violated
inline constexpr int kUnresolved = 3;  // a distance comparison could not be decided
inline constexpr int kUsage = 64;      // unknown command or flag
inline constexpr int kConfig = 65;     // malformed input document

// args excludes the program name: {"windows", "--config", "t.json", "--n", "3"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wmd::cli
