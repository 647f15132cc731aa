#pragma once

#include <span>
#include <string>
#include <vector>

namespace copreg {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// Joins with ';' using format_double.
std::string join_params(std::span<const double> values);

/// Splits one CSV line on commas (no quoting; the formats here never need it).
std::vector<std::string> split_csv_line(const std::string& line);

/// Writes `content` to `path`, throwing ConfigError if the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

} // namespace copreg
