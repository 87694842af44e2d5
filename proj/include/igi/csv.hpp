#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "igi/errors.hpp"

namespace igi {

// '.' decimal separator, 17 significant digits: doubles round-trip losslessly.
std::string format_double(double v);

using CsvCell = std::variant<double, long long, std::string>;

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<CsvCell>& cells);

private:
    std::ofstream out_;
    size_t ncols_;
};

}  // namespace igi
