#ifndef TCM_CSV_HPP
#define TCM_CSV_HPP

// deterministic CSV emission: '#' metadata lines, one header row, values
// printed with 12 significant digits so identical runs are byte-identical

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcm {

struct CsvTable {
    std::vector<std::string> comments;  // emitted as "# <line>"
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // each row matches columns.size()
};

inline std::string format_value(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string format_csv(const CsvTable& table) {
    std::string out;
    for (const auto& c : table.comments) {
        out += "# ";
        out += c;
        out += '\n';
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("csv row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_value(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f.write(content.data(), std::streamsize(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace tcm

#endif  // TCM_CSV_HPP
