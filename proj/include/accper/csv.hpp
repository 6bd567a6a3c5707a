#pragma once

#include <string>
#include <vector>

namespace accper {

// 17-significant-digit decimal rendering ('.' separator, no locale).
std::string format_double(double v);

struct csv_table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Writes header + rows with '\n' endings. Fields containing ',', '"' or
// newlines are quoted RFC-4180 style.
void write_csv(const std::string& path, const csv_table& table);

// Parses a CSV file written by write_csv (quotes honored). Throws
// std::runtime_error naming the 1-based row on any malformed line or field
// count mismatch against the header.
csv_table read_csv(const std::string& path);

// Field-to-double conversion that reports the row and column on failure.
double parse_csv_double(const csv_table& table, std::size_t row, std::size_t col);

// Header lookup; throws listing the available columns when absent.
std::size_t csv_column(const csv_table& table, const std::string& name);

}  // namespace accper
