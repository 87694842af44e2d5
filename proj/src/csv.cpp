#include "igi/csv.hpp"

#include <cstdio>

namespace igi {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), ncols_(columns.size()) {
    if (!out_) throw Error("cannot open " + path + " for writing");
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
    if (cells.size() != ncols_) throw Error("csv row arity mismatch");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        std::visit(
            [this](auto&& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>)
                    out_ << format_double(v);
                else if constexpr (std::is_same_v<T, long long>)
                    out_ << v;
                else
                    out_ << v;
            },
            cells[i]);
    }
    out_ << '\n';
}

}  // namespace igi
