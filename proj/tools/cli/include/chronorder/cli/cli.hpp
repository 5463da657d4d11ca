#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chronorder::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one chronorder invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Vocabulary entries closest to `word` by edit distance, best first.
std::vector<std::string> nearest_words(const std::string& word,
                                       const std::vector<std::string>& vocabulary,
                                       std::size_t count = 5);

}  // namespace chronorder::cli
