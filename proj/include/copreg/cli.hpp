#pragma once

#include "copreg/margins.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace copreg {

inline constexpr const char* kToolVersion = "copreg 0.1.0";

/// Reads a `y,x1[,x2]` CSV. Throws ConfigError naming the 1-based line of the
/// first malformed row, or for an empty file.
Dataset load_dataset(const std::string& path);

/// Flat key=value file; '#' starts a comment. Throws ConfigError on lines
/// without '='.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Runs one subcommand. Exit codes: 0 success, 2 configuration error,
/// 3 numeric failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace copreg
