#pragma once

#include <string>

namespace lanecurate {

// Locale-independent number formatting shared by the file writers.

/// 17 significant digits, printf "%.17g" style; -0 prints as "0".
std::string format_g17(double value);

/// Shortest string that parses back to the same double.
std::string format_shortest(double value);

/// Fixed notation with two decimals; negative zero prints as "0.00".
std::string format_fixed2(double value);

}  // namespace lanecurate
