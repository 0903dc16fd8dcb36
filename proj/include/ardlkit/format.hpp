#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ardlkit {

/// Shortest decimal text that parses back to the identical double.
std::string format_shortest(double x);

/// Decimal text with `digits` significant digits (round-half-even on the
/// binary value), trailing zeros kept; "nan"/"inf" spelled out.
std::string format_sig(double x, int digits = 10);

/// Fields of one CSV record; double-quoted fields may hold commas and "".
std::vector<std::string> split_csv_record(std::string_view line);

}  // namespace ardlkit
