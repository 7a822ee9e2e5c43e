#pragma once

// Small CSV/number helpers shared by the file readers and writers.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace tas::detail {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// Throws ParseError carrying `line_no` on anything but a complete finite number.
double parse_double(std::string_view field, std::size_t line_no);
std::uint64_t parse_u64(std::string_view field, std::size_t line_no);

/// Reads the next line, stripping a trailing '\r'. Returns false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no);

}  // namespace tas::detail
