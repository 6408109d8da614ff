#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nsul {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Comma-separated rows with a mandatory header and "\n" line endings;
/// numeric cells are formatted with format_double for byte-stable output.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);
    void numeric_row(const std::vector<double>& values);

  private:
    std::ostream& out_;
    size_t columns_ = 0;
    bool header_written_ = false;
};

}  // namespace nsul
