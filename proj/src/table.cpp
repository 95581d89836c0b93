#include "leaky/table.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leaky {

std::string format_value(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) {
        char buf[40];
        const auto res = std::to_chars(buf, buf + sizeof(buf), *d);
        return std::string(buf, res.ptr);
    }
    return std::get<std::string>(v);
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::logic_error("table row width mismatch");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_value(row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Table& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << to_csv(table);
}

namespace {

Value parse_cell(const std::string& cell) {
    if (!cell.empty()) {
        std::int64_t i = 0;
        auto ri = std::from_chars(cell.data(), cell.data() + cell.size(), i);
        if (ri.ec == std::errc{} && ri.ptr == cell.data() + cell.size()) return i;
        double d = 0.0;
        auto rd = std::from_chars(cell.data(), cell.data() + cell.size(), d);
        if (rd.ec == std::errc{} && rd.ptr == cell.data() + cell.size()) return d;
    }
    return cell;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace

Table parse_csv(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            table.columns = split_line(line);
            header = false;
            continue;
        }
        std::vector<Value> row;
        for (const std::string& cell : split_line(line)) row.push_back(parse_cell(cell));
        if (row.size() != table.columns.size()) throw std::runtime_error("ragged CSV row");
        table.rows.push_back(std::move(row));
    }
    if (header) throw std::runtime_error("CSV has no header row");
    return table;
}

int column_index(const Table& table, const std::string& name) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        if (table.columns[c] == name) return static_cast<int>(c);
    throw std::invalid_argument("no such column: " + name);
}

double numeric_at(const Table& table, std::size_t row, int col) {
    const Value& v = table.rows.at(row).at(static_cast<std::size_t>(col));
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    throw std::invalid_argument("cell is not numeric");
}

}  // namespace leaky
