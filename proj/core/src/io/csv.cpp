#include "qjump/io/csv.hpp"

#include <charconv>
#include <sstream>

#include "qjump/error.hpp"

namespace qjump::io {

std::string to_text(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
        throw ConfigError("invalid number '" + std::string(text) + "' for " + std::string(what));
    return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    long long v = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
        throw ConfigError("invalid integer '" + std::string(text) + "' for " + std::string(what));
    return v;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::trunc), path_(path), columns_(header.size()) {
    if (!out_) throw IoError("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::operator<<(double v) { return *this << std::string_view(to_text(v)); }

CsvWriter& CsvWriter::operator<<(long long v) { return *this << std::string_view(std::to_string(v)); }

CsvWriter& CsvWriter::operator<<(std::string_view v) {
    if (in_row_ == columns_) throw IoError("too many fields in a row of " + path_.string());
    if (in_row_++) out_ << ',';
    out_ << v;
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_) throw IoError("incomplete row in " + path_.string());
    out_ << '\n';
    in_row_ = 0;
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw IoError("failed writing " + path_.string());
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    const auto it = columns.find(name);
    if (it == columns.end()) throw IoError("missing CSV column '" + name + "'");
    return it->second;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV " + path.string());
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    std::vector<std::vector<double>*> cols;
    for (const auto& h : t.header) cols.push_back(&t.columns[h]);
    long long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= cols.size()) throw IoError(path.string() + ": too many fields on line " + std::to_string(row));
            cols[c]->push_back(parse_double(cell, t.header[c]));
            ++c;
        }
        if (c != cols.size()) throw IoError(path.string() + ": too few fields on line " + std::to_string(row));
    }
    return t;
}

}  // namespace qjump::io
