#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace modulo::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Parses RFC4180-style CSV: quoted fields, doubled quotes, embedded commas
/// and newlines, optional CRLF line endings. First row is the header.
Table parse(std::string_view text);

/// Throws LoadError when the file is missing or unreadable.
Table read_file(const std::filesystem::path& path);

std::string escape_field(std::string_view field);
std::string join_row(const std::vector<std::string>& fields);

}  // namespace modulo::csv
