#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpvff {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

/// Parses a whole string as a double (leading/trailing blanks allowed).
std::optional<double> parse_double(std::string_view s);

std::string_view trim(std::string_view s);

/// Splits on `sep`, trimming every field.
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace lpvff
