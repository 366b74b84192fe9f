#include "mrk/text.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "mrk/error.hpp"

namespace mrk {

std::string format_real(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, value);
  if (text.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, "not a real number: '" + std::string(text) + "'");
  }
  return value;
}

unsigned long long parse_unsigned(std::string_view text) {
  unsigned long long value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, "not an unsigned integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace mrk
