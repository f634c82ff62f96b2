#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dynbif {

// Round-trippable, locale-independent formatting ("%.17g"; NaN as "nan").
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::vector<std::string> header);
    void row(const std::vector<double>& values);
    void row_text(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
    std::size_t width_;
};

}  // namespace dynbif
