#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace leaky {

// Typed result table behind every experiment's results.csv. The column set
// is fixed per experiment kind.
using Value = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
};

// Locale-independent formatting: integers in decimal, doubles via shortest
// round-trip to_chars.
std::string format_value(const Value& v);
std::string to_csv(const Table& table);
void write_csv(const Table& table, const std::string& path);

// Parses CSV text produced by to_csv; numeric-looking cells become int64 or
// double values.
Table parse_csv(const std::string& text);

// Column/row lookup helpers.
int column_index(const Table& table, const std::string& name);
double numeric_at(const Table& table, std::size_t row, int col);

}  // namespace leaky
