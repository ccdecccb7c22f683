#include "lanecurate/text_format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace lanecurate {

namespace {

template <typename... Args>
std::string to_chars_string(double value, Args... args) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, args...);
  return std::string(buf.data(), end);
}

}  // namespace

std::string format_g17(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  return to_chars_string(value, std::chars_format::general, 17);
}

std::string format_shortest(double value) { return to_chars_string(value); }

std::string format_fixed2(double value) {
  std::string s = to_chars_string(value, std::chars_format::fixed, 2);
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace lanecurate
