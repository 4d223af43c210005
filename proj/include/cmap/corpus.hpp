#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cmap/csv.hpp"
#include "cmap/errors.hpp"
#include "cmap/util.hpp"

namespace cmap {

// One paragraph-level unit of text with metadata and qualitative codes.
struct SegmentRecord {
    std::string project;
    std::string number;
    long long reference = 0;
    std::string text;
    std::string document;
    std::vector<std::string> old_codes;
    long long start_position = 0;
    long long end_position = 0;
    std::vector<std::string> data_group;
    long long text_length = 0;
    long long word_count = 0;
    std::string doc_id;
    std::vector<std::string> codes;

    // Type problems noticed while parsing (field, violation). Folded into the
    // validation report; not part of the record's value.
    std::vector<std::pair<std::string, std::string>> parse_flags;

    bool operator==(const SegmentRecord& o) const {
        return project == o.project && number == o.number && reference == o.reference &&
               text == o.text && document == o.document && old_codes == o.old_codes &&
               start_position == o.start_position && end_position == o.end_position &&
               data_group == o.data_group && text_length == o.text_length &&
               word_count == o.word_count && doc_id == o.doc_id && codes == o.codes;
    }
};

enum class SegmentFormat { csv, jsonl };

inline const std::vector<std::string>& schema_fields() {
    static const std::vector<std::string> fields = {
        "project", "number", "reference", "text", "document", "old_codes",
        "start_position", "end_position", "data_group", "text_length",
        "word_count", "doc_id", "codes"};
    return fields;
}

struct SegmentTable {
    std::vector<SegmentRecord> records;
    std::string source_path;
    SegmentFormat format = SegmentFormat::csv;

    bool operator==(const SegmentTable& o) const { return records == o.records; }
};

struct ValidationIssue {
    long long row = 0; // 1-based record number
    std::string field;
    std::string violation;

    bool operator==(const ValidationIssue&) const = default;
};

using ValidationReport = std::vector<ValidationIssue>;

namespace detail {

inline bool is_list_field(std::string_view f) {
    return f == "old_codes" || f == "data_group" || f == "codes";
}

inline bool is_int_field(std::string_view f) {
    return f == "reference" || f == "start_position" || f == "end_position" ||
           f == "text_length" || f == "word_count";
}

// List-valued CSV cell: a JSON array string is preferred; anything else falls
// back to semicolon splitting (survives export quirks of QDA software).
inline std::vector<std::string> parse_list_cell(const std::string& cell, SegmentRecord& rec,
                                                const std::string& field) {
    std::string t = trim(cell);
    if (t.empty()) return {};
    if (t.front() == '[') {
        auto j = nlohmann::json::parse(t, nullptr, false);
        if (j.is_array()) {
            std::vector<std::string> out;
            for (const auto& el : j) {
                if (el.is_string()) out.push_back(el.get<std::string>());
                else {
                    out.push_back(el.dump());
                    rec.parse_flags.emplace_back(field, "not_a_list");
                }
            }
            return out;
        }
    }
    return split_list(t, ';');
}

inline long long parse_int_cell(const std::string& cell, SegmentRecord& rec,
                                const std::string& field) {
    std::string t = trim(cell);
    if (t.empty()) return 0;
    bool ok = false;
    long long v = parse_int(t, &ok);
    if (!ok) {
        rec.parse_flags.emplace_back(field, "not_an_integer");
        return 0;
    }
    return v;
}

inline void assign_field(SegmentRecord& rec, const std::string& field, const std::string& cell) {
    if (field == "project") rec.project = cell;
    else if (field == "number") rec.number = cell;
    else if (field == "reference") rec.reference = parse_int_cell(cell, rec, field);
    else if (field == "text") rec.text = cell;
    else if (field == "document") rec.document = cell;
    else if (field == "old_codes") rec.old_codes = parse_list_cell(cell, rec, field);
    else if (field == "start_position") rec.start_position = parse_int_cell(cell, rec, field);
    else if (field == "end_position") rec.end_position = parse_int_cell(cell, rec, field);
    else if (field == "data_group") rec.data_group = parse_list_cell(cell, rec, field);
    else if (field == "text_length") rec.text_length = parse_int_cell(cell, rec, field);
    else if (field == "word_count") rec.word_count = parse_int_cell(cell, rec, field);
    else if (field == "doc_id") rec.doc_id = cell;
    else if (field == "codes") rec.codes = parse_list_cell(cell, rec, field);
}

inline std::vector<std::string> json_list_field(const nlohmann::json& v, SegmentRecord& rec,
                                                const std::string& field) {
    if (v.is_null()) return {};
    if (v.is_array()) {
        std::vector<std::string> out;
        for (const auto& el : v) {
            if (el.is_string()) out.push_back(el.get<std::string>());
            else {
                out.push_back(el.dump());
                rec.parse_flags.emplace_back(field, "not_a_list");
            }
        }
        return out;
    }
    rec.parse_flags.emplace_back(field, "not_a_list");
    if (v.is_string()) return {v.get<std::string>()};
    return {v.dump()};
}

inline std::string json_string_field(const nlohmann::json& v, SegmentRecord& rec,
                                     const std::string& field) {
    if (v.is_null()) return {};
    if (v.is_string()) return v.get<std::string>();
    rec.parse_flags.emplace_back(field, "not_a_string");
    return v.dump();
}

inline long long json_int_field(const nlohmann::json& v, SegmentRecord& rec,
                                const std::string& field) {
    if (v.is_null()) return 0;
    if (v.is_number_integer() || v.is_number_unsigned()) return v.get<long long>();
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (d == static_cast<long long>(d)) return static_cast<long long>(d);
    }
    rec.parse_flags.emplace_back(field, "not_an_integer");
    return 0;
}

} // namespace detail

inline SegmentTable load_segments_csv(const std::string& path, const std::string& content) {
    auto rows = parse_csv(content);
    if (rows.empty()) throw DataError("empty csv file: " + path);
    const auto& header = rows[0];
    std::vector<std::string> columns;
    for (const auto& h : header) columns.push_back(trim(h));

    SegmentTable table;
    table.source_path = path;
    table.format = SegmentFormat::csv;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        if (cells.size() != columns.size())
            throw DataError("malformed row " + std::to_string(r) + ": expected " +
                            std::to_string(columns.size()) + " cells, got " +
                            std::to_string(cells.size()));
        SegmentRecord rec;
        for (std::size_t c = 0; c < columns.size(); ++c)
            detail::assign_field(rec, columns[c], cells[c]);
        table.records.push_back(std::move(rec));
    }
    return table;
}

inline SegmentTable load_segments_jsonl(const std::string& path, const std::string& content) {
    SegmentTable table;
    table.source_path = path;
    table.format = SegmentFormat::jsonl;
    std::size_t line_no = 0;
    for (const auto& line : split(content, '\n')) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto j = nlohmann::json::parse(t, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw DataError("malformed line " + std::to_string(line_no) + ": not a JSON object");
        SegmentRecord rec;
        auto get = [&](const char* k) -> nlohmann::json {
            auto it = j.find(k);
            return it == j.end() ? nlohmann::json() : *it;
        };
        rec.project = detail::json_string_field(get("project"), rec, "project");
        rec.number = detail::json_string_field(get("number"), rec, "number");
        rec.reference = detail::json_int_field(get("reference"), rec, "reference");
        rec.text = detail::json_string_field(get("text"), rec, "text");
        rec.document = detail::json_string_field(get("document"), rec, "document");
        rec.old_codes = detail::json_list_field(get("old_codes"), rec, "old_codes");
        rec.start_position = detail::json_int_field(get("start_position"), rec, "start_position");
        rec.end_position = detail::json_int_field(get("end_position"), rec, "end_position");
        rec.data_group = detail::json_list_field(get("data_group"), rec, "data_group");
        rec.text_length = detail::json_int_field(get("text_length"), rec, "text_length");
        rec.word_count = detail::json_int_field(get("word_count"), rec, "word_count");
        rec.doc_id = detail::json_string_field(get("doc_id"), rec, "doc_id");
        rec.codes = detail::json_list_field(get("codes"), rec, "codes");
        table.records.push_back(std::move(rec));
    }
    return table;
}

inline SegmentTable load_segments(const std::string& path, SegmentFormat format) {
    std::string content = read_file(path);
    switch (format) {
    case SegmentFormat::csv: return load_segments_csv(path, content);
    case SegmentFormat::jsonl: return load_segments_jsonl(path, content);
    }
    throw DataError("unknown format");
}

inline std::string serialize_segments_csv(const SegmentTable& table) {
    std::string out = csv_row(schema_fields());
    auto list_cell = [](const std::vector<std::string>& v) {
        return nlohmann::json(v).dump();
    };
    for (const auto& r : table.records) {
        out += csv_row({r.project, r.number, std::to_string(r.reference), r.text, r.document,
                        list_cell(r.old_codes), std::to_string(r.start_position),
                        std::to_string(r.end_position), list_cell(r.data_group),
                        std::to_string(r.text_length), std::to_string(r.word_count), r.doc_id,
                        list_cell(r.codes)});
    }
    return out;
}

inline std::string serialize_segments_jsonl(const SegmentTable& table) {
    std::string out;
    for (const auto& r : table.records) {
        nlohmann::ordered_json j;
        j["project"] = r.project;
        j["number"] = r.number;
        j["reference"] = r.reference;
        j["text"] = r.text;
        j["document"] = r.document;
        j["old_codes"] = r.old_codes;
        j["start_position"] = r.start_position;
        j["end_position"] = r.end_position;
        j["data_group"] = r.data_group;
        j["text_length"] = r.text_length;
        j["word_count"] = r.word_count;
        j["doc_id"] = r.doc_id;
        j["codes"] = r.codes;
        out += j.dump();
        out += '\n';
    }
    return out;
}

inline void save_segments(const SegmentTable& table, const std::string& path,
                          SegmentFormat format) {
    write_file(path, format == SegmentFormat::csv ? serialize_segments_csv(table)
                                                  : serialize_segments_jsonl(table));
}

// Checks every record against the schema rules. Violations are data, not
// errors: the table itself is never mutated and nothing is thrown.
inline ValidationReport validate_schema(const SegmentTable& table) {
    ValidationReport report;
    std::map<std::string, long long> doc_id_first_row;
    long long row = 0;
    for (const auto& rec : table.records) {
        ++row;
        for (const auto& field : schema_fields()) {
            for (const auto& [f, v] : rec.parse_flags)
                if (f == field) report.push_back({row, field, v});
            if (field == "text" && trim(rec.text).empty())
                report.push_back({row, "text", "empty_critical_field"});
            if (field == "document" && trim(rec.document).empty())
                report.push_back({row, "document", "empty_critical_field"});
            if (field == "old_codes" || field == "codes") {
                const auto& items = field == "codes" ? rec.codes : rec.old_codes;
                for (const auto& item : items)
                    if (trim(item).empty()) {
                        report.push_back({row, field, "empty_list_item"});
                        break;
                    }
            }
            if (field == "doc_id" && !rec.doc_id.empty()) {
                auto [it, inserted] = doc_id_first_row.emplace(rec.doc_id, row);
                if (!inserted) report.push_back({row, "doc_id", "duplicate_doc_id"});
            }
        }
    }
    return report;
}

inline nlohmann::json validation_report_json(const ValidationReport& report) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : report)
        arr.push_back({{"row", v.row}, {"field", v.field}, {"violation", v.violation}});
    return arr;
}

} // namespace cmap
