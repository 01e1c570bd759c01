#include "cli/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fbm/errors.hpp"

namespace fbmcli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool parse_number(std::string_view cell, double& out) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    if (cell.empty()) return false;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(std::string_view text, std::string name, std::string source) {
    Dataset data;
    data.name = std::move(name);
    data.source = std::move(source);

    std::size_t columns = 0;
    std::size_t line_no = 0;
    bool seen_first = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;

        const auto cells = split(line);
        if (cells.size() > 2) {
            throw fbm::ParseError("expected 1 or 2 columns, found " + std::to_string(cells.size()),
                                  line_no);
        }
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (std::size_t c = 0; c < cells.size(); ++c) numeric = numeric && parse_number(cells[c], row[c]);

        if (!seen_first) {
            seen_first = true;
            columns = cells.size();
            if (!numeric) {
                data.had_header = true;
                continue;
            }
        }
        if (cells.size() != columns) {
            throw fbm::ParseError("expected " + std::to_string(columns) + " columns, found " +
                                      std::to_string(cells.size()),
                                  line_no);
        }
        if (!numeric) {
            std::string bad;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                double tmp;
                if (!parse_number(cells[c], tmp)) bad = std::string(cells[c]);
            }
            throw fbm::ParseError("not a finite number: '" + bad + "'", line_no);
        }
        if (columns == 2) {
            data.index.push_back(row[0]);
            data.values.push_back(row[1]);
        } else {
            data.values.push_back(row[0]);
        }
    }
    if (data.values.empty()) throw fbm::ParseError("no data rows", 0);
    return data;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fbm::IoError("cannot open " + path.string() + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw fbm::IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw fbm::IoError("write to " + path.string() + " failed");
}

Dataset read_csv(const std::filesystem::path& path) {
    return parse_csv(read_text(path), path.stem().string(), path.string());
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_series_csv(const std::filesystem::path& path, std::span<const double> values) {
    std::string text = "index,value\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
        text += std::to_string(k);
        text += ',';
        text += format_double(values[k]);
        text += '\n';
    }
    write_text(path, text);
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
    std::string text;
    auto emit = [&text](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) text += ',';
            text += cells[c];
        }
        text += '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    write_text(path, text);
}

}  // namespace fbmcli
