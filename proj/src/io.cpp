#include "sel/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "sel/error.hpp"

namespace sel::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf.data(), end);
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

CsvWriter::CsvWriter(std::initializer_list<std::string_view> header) {
    for (auto h : header) cell(h);
    end_row();
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) {
    for (const auto& h : header) cell(h);
    end_row();
}

void CsvWriter::sep() {
    if (row_open_) out_.push_back(',');
    row_open_ = true;
}

CsvWriter& CsvWriter::cell(double v) {
    sep();
    out_ += format_double(v);
    return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
    sep();
    out_ += std::to_string(v);
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
    sep();
    if (v.find_first_of(",\"\n") == std::string_view::npos) {
        out_ += v;
    } else {
        out_.push_back('"');
        for (char c : v) {
            if (c == '"') out_.push_back('"');
            out_.push_back(c);
        }
        out_.push_back('"');
    }
    return *this;
}

CsvWriter& CsvWriter::blank() {
    sep();
    return *this;
}

void CsvWriter::end_row() {
    out_.push_back('\n');
    row_open_ = false;
}

Format format_from_string(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw Error(Errc::validation, "unknown format '" + name + "' (expected csv or json)");
}

std::string extension(Format format) { return format == Format::csv ? "csv" : "json"; }

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

Table& Table::row(std::vector<Cell> cells) {
    if (cells.size() != columns_.size()) {
        throw Error(Errc::validation, "row has " + std::to_string(cells.size()) + " cells, table has " +
                                          std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(cells));
    return *this;
}

std::string Table::to_csv() const {
    CsvWriter csv(columns_);
    for (const auto& r : rows_) {
        for (const auto& c : r) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) {
                        csv.blank();
                    } else {
                        csv.cell(v);
                    }
                },
                c);
        }
        csv.end_row();
    }
    return csv.str();
}

nlohmann::json Table::to_json() const {
    auto out = nlohmann::json::array();
    for (const auto& r : rows_) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) {
                        obj[columns_[i]] = nullptr;
                    } else {
                        obj[columns_[i]] = v;
                    }
                },
                r[i]);
        }
        out.push_back(std::move(obj));
    }
    return out;
}

std::string Table::render(Format format) const {
    return format == Format::csv ? to_csv() : to_json().dump(2) + "\n";
}

}  // namespace sel::io
