#include "gaincond/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gaincond {

Format parse_format(const std::string& name) {
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    if (name == "table" || name == "text_table") return Format::table;
    throw std::invalid_argument("unknown format '" + name + "'");
}

const char* to_string(Format f) {
    switch (f) {
        case Format::json: return "json";
        case Format::csv: return "csv";
        case Format::table: return "table";
    }
    return "?";
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace gaincond
