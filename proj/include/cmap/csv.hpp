#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cmap/errors.hpp"

namespace cmap {

// RFC 4180 reader: quoted fields, "" escapes, LF or CRLF line ends, embedded
// newlines inside quoted fields. Returns one vector of cells per row.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view content) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool cell_started = false;
    std::size_t line = 1;

    auto end_cell = [&] {
        row.push_back(cell);
        cell.clear();
        cell_started = false;
    };
    auto end_row = [&] {
        end_cell();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                cell += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (cell.empty() && !cell_started) {
                in_quotes = true;
                cell_started = true;
            } else {
                cell += c; // stray quote mid-cell, keep literally
            }
            break;
        case ',':
            end_cell();
            break;
        case '\r':
            break;
        case '\n':
            end_row();
            ++line;
            break;
        default:
            cell += c;
            cell_started = true;
        }
    }
    if (in_quotes)
        throw DataError("unterminated quoted field at line " + std::to_string(line));
    if (cell_started || !cell.empty() || !row.empty()) end_row();
    return rows;
}

inline std::string csv_escape(std::string_view cell) {
    bool needs = cell.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(cells[i]);
    }
    out += '\n';
    return out;
}

} // namespace cmap
