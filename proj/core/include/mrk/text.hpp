#pragma once

#include <string>
#include <string_view>

namespace mrk {

// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

// Strict parse of the whole string; throws Error(InvalidArgument).
double parse_real(std::string_view text);
unsigned long long parse_unsigned(std::string_view text);

}  // namespace mrk
