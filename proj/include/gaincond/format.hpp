#pragma once

#include <string>

namespace gaincond {

enum class Format { json, csv, table };

Format parse_format(const std::string& name);  // throws std::invalid_argument
const char* to_string(Format f);

// Shortest decimal string that parses back to exactly the same double
// ("inf"/"-inf"/"nan" for the non-finite values).
std::string format_number(double v);

// Fixed-point rendering for tables.
std::string format_fixed(double v, int decimals);

}  // namespace gaincond
