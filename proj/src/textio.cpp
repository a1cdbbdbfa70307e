#include "nlwave/textio.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "nlwave/errors.hpp"

namespace nlwave {

std::vector<std::vector<double>> read_columns(const std::filesystem::path& path, std::size_t columns) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<std::vector<double>> out(columns);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        for (std::size_t c = 0; c < columns; ++c) {
            double v = 0.0;
            if (!(row >> v)) {
                throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(columns) + " numeric columns");
            }
            out[c].push_back(v);
        }
    }
    return out;
}

void write_columns(const std::filesystem::path& path, const std::vector<std::vector<double>>& columns,
                   const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& h : header) out << "# " << h << "\n";
    out << std::setprecision(17);
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out << (c ? " " : "") << columns[c][i];
        }
        out << "\n";
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

}  // namespace nlwave
