#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small CSV writer: comma delimiter, LF line endings, fields quoted when they
// contain a delimiter, quote, or newline. Numbers carry 9 significant digits
// so outputs are stable enough for byte-for-byte golden comparisons.

namespace plaas::io {

[[nodiscard]] std::string format_number(double value);
[[nodiscard]] std::string csv_field(std::string_view text);
[[nodiscard]] std::string csv_row(const std::vector<std::string>& fields);

}  // namespace plaas::io
