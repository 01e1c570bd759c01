#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fbmcli {

struct Dataset {
    std::string name;
    /// Second column when two are present, otherwise the only column.
    std::vector<double> values;
    /// First column of a two-column file; empty otherwise.
    std::vector<double> index;
    std::string source;
    bool had_header = false;
};

/// Header row optional, one or two comma-separated columns, blank lines
/// skipped. Numbers are parsed with std::from_chars, so the decimal
/// separator is always '.', whatever the process locale.
Dataset parse_csv(std::string_view text, std::string name = "", std::string source = "");

Dataset read_csv(const std::filesystem::path& path);

/// Shortest text that reads back as the same double.
std::string format_double(double value);

/// Writes "index,value" rows with index 0, 1, 2, ...
void write_series_csv(const std::filesystem::path& path, std::span<const double> values);

/// Writes a header plus rows of equal length.
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace fbmcli
