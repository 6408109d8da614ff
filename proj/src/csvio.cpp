#include "nsul/csvio.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace nsul {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void CsvWriter::header(const std::vector<std::string>& names) {
    if (header_written_) throw std::logic_error("CsvWriter: header already written");
    columns_ = names.size();
    for (size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
    out_ << "\n";
    header_written_ = true;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (!header_written_) throw std::logic_error("CsvWriter: header required first");
    if (cells.size() != columns_)
        throw std::invalid_argument("CsvWriter: column count mismatch");
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
}

void CsvWriter::numeric_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row(cells);
}

}  // namespace nsul
