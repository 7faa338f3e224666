// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace stochtex {

// Shortest round-trip decimal form; "inf", "-inf" and "nan" otherwise.
inline std::string format_number(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// Minimal CSV row builder. Fields are written verbatim; callers only pass
// numbers and identifiers, which never need quoting.
class CsvRow {
  public:
    CsvRow &operator<<(double v) { return field(format_number(v)); }
    CsvRow &operator<<(long long v) { return field(std::to_string(v)); }
    CsvRow &operator<<(unsigned long long v) { return field(std::to_string(v)); }
    CsvRow &operator<<(int v) { return field(std::to_string(v)); }
    CsvRow &operator<<(std::string_view s) { return field(std::string(s)); }
    CsvRow &operator<<(const char *s) { return field(s); }

    const std::string &str() const { return line_; }

  private:
    CsvRow &field(const std::string &s) {
        if (!first_)
            line_ += ',';
        first_ = false;
        line_ += s;
        return *this;
    }
    std::string line_;
    bool first_ = true;
};

inline void write_csv_header(std::ostream &out, std::initializer_list<std::string_view> names) {
    bool first = true;
    for (auto n : names) {
        if (!first)
            out << ',';
        first = false;
        out << n;
    }
    out << '\n';
}

} // namespace stochtex
