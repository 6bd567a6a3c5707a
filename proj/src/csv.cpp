#include "accper/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace accper {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

void write_field(std::ostream& os, const std::string& s) {
    if (!needs_quoting(s)) {
        os << s;
        return;
    }
    os << '"';
    for (char c : s) {
        if (c == '"') os << '"';
        os << c;
    }
    os << '"';
}

void write_row(std::ostream& os, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        write_field(os, row[i]);
    }
    os << '\n';
}

// Full-stream RFC-4180 record scanner: quoted fields may contain commas,
// doubled quotes and newlines, so records cannot be split on '\n' first.
std::vector<std::vector<std::string>> parse_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false, field_started = false;
    auto end_field = [&] {
        fields.push_back(cur);
        cur.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(fields));
        fields.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started)
                    throw std::runtime_error("csv row " + std::to_string(records.size() + 1) +
                                             ": quote inside unquoted field");
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;  // tolerate CRLF input
            case '\n':
                end_record();
                break;
            default:
                cur += c;
                field_started = true;
                break;
        }
    }
    if (in_quotes)
        throw std::runtime_error("csv row " + std::to_string(records.size() + 1) +
                                 ": unterminated quote");
    if (field_started || !fields.empty()) end_record();  // final record without trailing newline
    return records;
}

}  // namespace

void write_csv(const std::string& path, const csv_table& table) {
    if (table.header.empty()) throw std::invalid_argument("write_csv: header is required");
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        if (table.rows[i].size() != table.header.size())
            throw std::invalid_argument("write_csv: row " + std::to_string(i + 1) + " has " +
                                        std::to_string(table.rows[i].size()) + " fields, header has " +
                                        std::to_string(table.header.size()));
    std::ofstream os(path, std::ios::binary);  // binary: keep '\n' endings everywhere
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    write_row(os, table.header);
    for (const auto& row : table.rows) write_row(os, row);
    os.flush();
    if (!os) throw std::runtime_error("write_csv: write failure on " + path);
}

csv_table read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    auto records = parse_records(text);
    if (records.empty()) throw std::runtime_error("read_csv: " + path + " is empty");
    csv_table table;
    if (records[0].size() == 1 && records[0][0].empty())
        throw std::runtime_error("csv row 1: empty header");
    table.header = std::move(records[0]);
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size())
            throw std::runtime_error("csv row " + std::to_string(r + 1) + ": expected " +
                                     std::to_string(table.header.size()) + " fields, got " +
                                     std::to_string(records[r].size()));
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

double parse_csv_double(const csv_table& table, std::size_t row, std::size_t col) {
    if (row >= table.rows.size() || col >= table.rows[row].size())
        throw std::runtime_error("csv: cell (" + std::to_string(row + 2) + "," +
                                 std::to_string(col + 1) + ") out of range");
    const std::string& s = table.rows[row][col];
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("csv row " + std::to_string(row + 2) + ": field '" + s +
                                 "' in column " + std::to_string(col + 1) + " is not a number");
    return v;
}

std::size_t csv_column(const csv_table& table, const std::string& name) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
        if (table.header[i] == name) return i;
    std::string have;
    for (const auto& h : table.header) {
        if (!have.empty()) have += ", ";
        have += h;
    }
    throw std::runtime_error("csv: missing column '" + name + "' (have: " + have + ")");
}

}  // namespace accper
