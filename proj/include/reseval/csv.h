#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace reseval {

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// Minimal RFC 4180 reader: comma separated, double-quoted fields may contain
// commas, quotes ("") and newlines. A trailing newline does not produce an
// empty row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or -1.
  int column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

std::string quote_csv_field(std::string_view field);
std::string to_csv(const CsvTable& table);

// Writes via a temporary sibling and rename.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace reseval
