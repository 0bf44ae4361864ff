#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace conwave {

// Formats a double with 17 significant digits, '.' decimal separator,
// locale-independent; doubles round-trip exactly.
std::string format_double(double value);

void write_csv_row(std::ostream& out, std::span<const std::string> cells);
void write_csv_row(std::ostream& out, std::span<const double> values);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    // column index by header name; throws if absent
    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

} // namespace conwave
