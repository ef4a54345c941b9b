#include "monofourier/io.hpp"

#include <cmath>
#include <cstdio>

#include "monofourier/errors.hpp"

namespace mfourier {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11g", v);
    return buf;
}

std::string format_ratio(double r) {
    if (!std::isfinite(r)) return "nan";
    char buf[64];
    if (std::abs(r) >= 10.0)
        std::snprintf(buf, sizeof buf, "%.0f", r);
    else
        std::snprintf(buf, sizeof buf, "%#.2g", r);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw ConfigError("cannot open output file " + path.string());
    row(header);
}

void CsvWriter::row(std::initializer_list<double> cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double c : cells) s.push_back(format_value(c));
    row(s);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw ConfigError("CSV row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw ConfigError("write to CSV output failed");
}

} // namespace mfourier
