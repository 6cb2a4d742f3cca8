#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include <fmt/format.h>

namespace bcconf::csv {

/// Shortest decimal text that parses back to the same double.
inline std::string number(double x) {
    return fmt::format("{}", x);
}

inline std::string field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

inline std::string cell(double x) { return number(x); }
inline std::string cell(int x) { return std::to_string(x); }
inline std::string cell(long x) { return std::to_string(x); }
inline std::string cell(long long x) { return std::to_string(x); }
inline std::string cell(unsigned x) { return std::to_string(x); }
inline std::string cell(unsigned long x) { return std::to_string(x); }
inline std::string cell(unsigned long long x) { return std::to_string(x); }
inline std::string cell(bool x) { return x ? "true" : "false"; }
inline std::string cell(std::string_view x) { return field(x); }
inline std::string cell(const std::string& x) { return field(x); }
inline std::string cell(const char* x) { return field(x); }

/// Writes one comma-separated record terminated by "\n".
template <typename... Cells>
void row(std::ostream& out, const Cells&... cells) {
    bool first = true;
    ((out << (first ? "" : ",") << cell(cells), first = false), ...);
    out << '\n';
}

}  // namespace bcconf::csv
