#pragma once

/// \file
/// Lossless text formatting of numbers and a minimal CSV builder/reader.
/// Doubles are written with 17 significant digits, which round-trips every
/// finite IEEE-754 binary64 value.

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "rmf/errors.hpp"

namespace rmf {

inline std::string format_double(double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

inline double parse_double(std::string_view text) {
    const std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw InvalidArgument("not a number: '" + s + "'");
    return v;
}

/// Builds CSV text row by row. Fields never contain commas or quotes.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header) {
        append_row(header);
    }

    CsvBuilder& field(std::string_view s) {
        if (!first_) text_ += ',';
        text_ += s;
        first_ = false;
        return *this;
    }
    CsvBuilder& field(double v) { return field(format_double(v)); }
    CsvBuilder& field(std::int64_t v) { return field(std::to_string(v)); }
    CsvBuilder& field(std::uint64_t v) { return field(std::to_string(v)); }
    CsvBuilder& field(int v) { return field(std::to_string(v)); }
    CsvBuilder& field(std::uint32_t v) { return field(std::to_string(v)); }

    CsvBuilder& end_row() {
        text_ += '\n';
        first_ = true;
        return *this;
    }

    const std::string& str() const noexcept { return text_; }

private:
    void append_row(const std::vector<std::string>& cells) {
        for (const auto& c : cells) field(c);
        end_row();
    }

    std::string text_;
    bool first_ = true;
};

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.emplace_back(line.substr(start));
            break;
        }
        cells.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

/// Parsed CSV: header plus string cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        auto line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
        } else {
            if (cells.size() != table.header.size()) {
                throw InvalidArgument("csv row has " + std::to_string(cells.size()) +
                                      " fields, header has " + std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

}  // namespace rmf
