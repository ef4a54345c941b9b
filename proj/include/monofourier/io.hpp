#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace mfourier {

/// 11 significant digits, the precision of the published tables.
std::string format_value(double v);

/// Two significant digits for ratios of successive changes; "nan" marker if undefined.
std::string format_ratio(double r);

/// Comma-separated output with a header row and LF line endings.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(std::initializer_list<double> cells);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
};

} // namespace mfourier
