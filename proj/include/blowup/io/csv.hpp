#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace blowup::io {

/// 17 significant digits, so values read back bit-identically.
std::string format_double(double v);

/// Comma-separated numeric table with one header line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws ConfigError when the column is missing.
  std::vector<double> column(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;
};

/// Throws ConfigError on unreadable files, ragged rows or non-numeric cells.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "csv");

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  CsvWriter& row(std::span<const double> values);
  CsvWriter& row(std::initializer_list<double> values) { return row(std::span<const double>(values.begin(), values.size())); }
  const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Writes to a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

}  // namespace blowup::io
