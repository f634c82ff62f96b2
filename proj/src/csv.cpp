#include "dynbif/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dynbif {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0) return "0";  // folds -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(os), width_(header.size())
{
    row_text(header);
}

void CsvWriter::row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row_text(cells);
}

void CsvWriter::row_text(const std::vector<std::string>& cells)
{
    if (cells.size() != width_) throw std::invalid_argument("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ',';
        os_ << cells[i];
    }
    os_ << '\n';
}

}  // namespace dynbif
