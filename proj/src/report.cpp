#include "squelp/report.hpp"

#include <cstdio>
#include <filesystem>

#include "squelp/errors.hpp"

namespace squelp {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_num(std::size_t v) { return std::to_string(v); }
std::string fmt_num(int v) { return std::to_string(v); }

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), width_(columns.size()), path_(path) {
    if (!out_) throw Error("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_)
        throw Error("row width " + std::to_string(cells.size()) + " != header width " +
                    std::to_string(width_) + " in '" + path_ + "'");
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

SummaryWriter::SummaryWriter(const std::string& path) : out_(path) {
    if (!out_) throw Error("cannot open '" + path + "' for writing");
}

void SummaryWriter::kv(const std::string& key, const std::string& value) {
    out_ << key << '=' << value << '\n';
}
void SummaryWriter::kv(const std::string& key, double value) { kv(key, fmt_num(value)); }
void SummaryWriter::kv(const std::string& key, std::size_t value) { kv(key, fmt_num(value)); }
void SummaryWriter::kv(const std::string& key, bool value) { kv(key, std::string(value ? "true" : "false")); }

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec && !std::filesystem::is_directory(path))
        throw Error("cannot create directory '" + path + "': " + ec.message());
}

} // namespace squelp
