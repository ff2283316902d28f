#ifndef TCM_SVG_HPP
#define TCM_SVG_HPP

// bare-bones line plot of a CsvTable (column 0 = x, the rest = series);
// a convenience rendering only, nothing downstream depends on it

#include <algorithm>
#include <cmath>

#include "tcm/csv.hpp"

namespace tcm {

inline std::string render_svg(const CsvTable& table, const std::string& title) {
    const int W = 880, H = 520, ML = 70, MR = 20, MT = 40, MB = 45;
    const char* palette[] = {"#1f6fb2", "#d1495b", "#3a9d5d", "#8f5fb8", "#c98a19", "#3aa0a6"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) +
           "\" height=\"" + std::to_string(H) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (table.rows.size() < 2 || table.columns.size() < 2) {
        svg += "<text x=\"20\" y=\"30\">not enough data</text>\n</svg>\n";
        return svg;
    }
    double xmin = table.rows.front()[0], xmax = table.rows.back()[0];
    double ymin = table.rows[0][1], ymax = ymin;
    for (const auto& r : table.rows)
        for (std::size_t c = 1; c < r.size(); ++c) {
            ymin = std::min(ymin, r[c]);
            ymax = std::max(ymax, r[c]);
        }
    if (ymax == ymin) ymax = ymin + 1.0;
    if (xmax == xmin) xmax = xmin + 1.0;
    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };
    svg += "<text x=\"" + std::to_string(ML) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" +
           title + "</text>\n";
    char buf[64];
    auto axis_label = [&](double v, double x, double y, const char* anchor) {
        std::snprintf(buf, sizeof buf, "%.4g", v);
        svg += "<text x=\"" + std::to_string(int(x)) + "\" y=\"" + std::to_string(int(y)) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" + anchor + "\">" + buf +
               "</text>\n";
    };
    svg += "<rect x=\"" + std::to_string(ML) + "\" y=\"" + std::to_string(MT) + "\" width=\"" +
           std::to_string(W - ML - MR) + "\" height=\"" + std::to_string(H - MT - MB) +
           "\" fill=\"none\" stroke=\"#999\"/>\n";
    axis_label(xmin, px(xmin), H - MB + 16, "middle");
    axis_label(xmax, px(xmax), H - MB + 16, "middle");
    axis_label(ymin, ML - 6, py(ymin) + 4, "end");
    axis_label(ymax, ML - 6, py(ymax) + 4, "end");
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        const char* color = palette[(c - 1) % 6];
        std::string pts;
        for (const auto& r : table.rows) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(r[0]), py(r[c]));
            pts += buf;
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.2\" points=\"" + pts + "\"/>\n";
        svg += "<text x=\"" + std::to_string(W - MR - 150) + "\" y=\"" +
               std::to_string(MT + 16 * int(c)) + "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
               color + "\">" + table.columns[c] + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace tcm

#endif  // TCM_SVG_HPP
