#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace reform {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Minimal CSV table: header plus string cells. Fields never contain commas
/// or quotes in anything this tool writes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws ParseError when absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view col) const;
  const std::string& text(std::size_t row, std::string_view col) const;
};

std::string write_csv(const CsvTable& table);
/// Throws ParseError (with line number) on ragged rows.
CsvTable read_csv(std::string_view text);

double parse_double(std::string_view s);
long long parse_int(std::string_view s);

}  // namespace reform
