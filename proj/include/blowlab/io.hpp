#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace blowlab {

/// 17 significant digits; round-trips doubles exactly.
std::string fmt17(double v);

/// CSV with a fixed header written on open; numeric cells at 17 digits.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& cells);

  private:
    std::ofstream out_;
    std::size_t width_;
};

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Parses a CSV written by CsvWriter; returns rows of raw cells (header skipped).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace blowlab
