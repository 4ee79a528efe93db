#pragma once

#include <string>
#include <vector>

namespace tracksketch {

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Splits one CSV record, honouring double-quoted fields and `""` escapes.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace tracksketch
