#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mhdrelax::io {

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

/// Shortest representation that parses back to the same double.
std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string to_string() const;

  static CsvTable parse(std::string_view text);
  std::size_t column(std::string_view name) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes the CSV atomically plus a "<name>.meta" sidecar holding the
/// ISO-8601 UTC run timestamp, so the CSV bytes stay deterministic.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

std::string iso8601_now();

}  // namespace mhdrelax::io
