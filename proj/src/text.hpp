#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mif {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double x);

// Strict numeral parse: optional sign, decimal or scientific notation,
// whole cell consumed. Rejects nan/inf and empty input.
std::optional<double> parse_double(std::string_view cell);

std::vector<std::string_view> split_tabs(std::string_view line);

// C-identifier style: [A-Za-z_][A-Za-z0-9_]*
bool is_identifier(std::string_view name);

}  // namespace mif
