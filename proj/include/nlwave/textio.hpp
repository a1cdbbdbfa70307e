#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace nlwave {

/// Whitespace-separated numeric columns. Blank lines and lines starting with '#'
/// are skipped. Throws ParseError naming the line on malformed rows.
std::vector<std::vector<double>> read_columns(const std::filesystem::path& path, std::size_t columns);

/// Writes rows with 17 significant digits. `header` lines are prefixed by '#'.
void write_columns(const std::filesystem::path& path, const std::vector<std::vector<double>>& columns,
                   const std::vector<std::string>& header = {});

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace nlwave
