#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace squelp {

/// Formats a double with enough digits to round-trip exactly (%.17g), so
/// repeated runs produce byte-identical files.
std::string fmt_num(double v);
std::string fmt_num(std::size_t v);
std::string fmt_num(int v);

/// Comma-separated writer with a fixed header row.  Cells are written as
/// given; use fmt_num for numerics.  No timestamps or environment state ever
/// reach the file.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

  private:
    std::ofstream out_;
    std::size_t width_;
    std::string path_;
};

/// key=value summary file, one pair per line, in insertion order.
class SummaryWriter {
  public:
    explicit SummaryWriter(const std::string& path);
    void kv(const std::string& key, const std::string& value);
    void kv(const std::string& key, double value);
    void kv(const std::string& key, std::size_t value);
    void kv(const std::string& key, bool value);

  private:
    std::ofstream out_;
};

/// Creates the directory (and parents) if needed; throws on failure.
void ensure_dir(const std::string& path);

} // namespace squelp
