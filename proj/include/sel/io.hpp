#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace sel::io {

/// Shortest text with 17 significant digits; bit-stable across runs.
std::string format_double(double v);

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

class CsvWriter {
public:
    explicit CsvWriter(std::initializer_list<std::string_view> header);
    explicit CsvWriter(const std::vector<std::string>& header);

    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(std::string_view v);
    CsvWriter& blank();
    void end_row();

    const std::string& str() const noexcept { return out_; }

private:
    void sep();
    std::string out_;
    bool row_open_ = false;
};

enum class Format { csv, json };

Format format_from_string(const std::string& name);
/// "csv" or "json".
std::string extension(Format format);

/// A blank cell renders as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, long long, std::string>;

/// Column-labelled rows, rendered as CSV or as a JSON array of objects.
class Table {
public:
    explicit Table(std::vector<std::string> columns);

    Table& row(std::vector<Cell> cells);

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

    std::string to_csv() const;
    nlohmann::json to_json() const;
    std::string render(Format format) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace sel::io
