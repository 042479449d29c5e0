#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdtk::detail {

/// Splits on LF, dropping one trailing CR per line. A final empty line is not emitted.
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split_whitespace(std::string_view line);
std::vector<std::string_view> split_char(std::string_view line, char sep);
std::string_view trim(std::string_view s);
/// Locale-independent strict parse; nullopt unless the whole token is a number.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
/// Shortest round-tripping decimal form of a double.
std::string format_double(double v);

}  // namespace sdtk::detail
