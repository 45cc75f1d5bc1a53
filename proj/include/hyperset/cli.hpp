#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hyperset/limits.hpp"

namespace hyperset::cli {

enum class Format { Canonical, Dot, Json };

struct CliConfig {
  Limits limits;
  Format format = Format::Canonical;
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNotEqual = 1;
inline constexpr int kUserError = 2;
inline constexpr int kLimitError = 3;

// Runs one command line (without the program name). HYPERSET_NODE_BUDGET
// in the environment overrides the default node budget; --node-budget
// overrides both.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperset::cli
