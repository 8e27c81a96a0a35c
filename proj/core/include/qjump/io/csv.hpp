#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qjump::io {

/// Shortest decimal text that parses back to the same double.
std::string to_text(double v);
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

/// Streaming CSV writer; the header row names every column with its unit.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(long long v);
    CsvWriter& operator<<(int v) { return *this << static_cast<long long>(v); }
    CsvWriter& operator<<(std::string_view v);
    void end_row();
    void close();

private:
    std::ofstream out_;
    std::filesystem::path path_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

/// Whole-file CSV table of numeric columns keyed by header name.
struct CsvTable {
    std::vector<std::string> header;
    std::map<std::string, std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const;
    std::size_t rows() const { return columns.empty() ? 0 : columns.begin()->second.size(); }
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace qjump::io
