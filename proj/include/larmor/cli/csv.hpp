#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace larmor::cli {

/// Round-trip exact rendering: scientific notation, 17 significant digits, '.' decimal.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

/// One-line header, then comma-separated rows. Cells are either numbers or bare tokens.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
        columns_ = header.size();
        write_cells(header);
    }

    class Row {
    public:
        explicit Row(CsvWriter& w) : w_(w) {}
        Row& operator<<(double v) {
            cells_.push_back(format_double(v));
            return *this;
        }
        Row& operator<<(int v) {
            cells_.push_back(std::to_string(v));
            return *this;
        }
        Row& operator<<(const std::string& token) {
            cells_.push_back(token);
            return *this;
        }
        ~Row() noexcept(false) { w_.write_cells(cells_); }

    private:
        CsvWriter& w_;
        std::vector<std::string> cells_;
    };

    Row row() { return Row(*this); }

    void write_cells(const std::vector<std::string>& cells) {
        if (cells.size() != columns_) throw std::logic_error("CsvWriter: row width differs from header");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    std::size_t columns_ = 0;
};

}  // namespace larmor::cli
