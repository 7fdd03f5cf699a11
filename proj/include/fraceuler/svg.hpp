#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fraceuler/report.hpp"

namespace fraceuler {

/// Static-plot description: one x column against one or more y columns,
/// optionally on log axes.
struct PlotSpec {
    std::string x_column;
    std::vector<std::string> y_columns;
    bool log_x = false;
    bool log_y = false;
    std::string title;
};

namespace detail {

inline std::size_t column_index(const ResultTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.schema.size(); ++i)
        if (table.schema[i] == name) return i;
    throw std::invalid_argument("emit_svg: column '" + name + "' not in schema");
}

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace detail

/// Writes a static SVG line plot of the table columns. Axis labels come from
/// the schema; log axes plot log10 of the data with ticks at the data range.
inline void emit_svg(const ResultTable& table, const PlotSpec& spec, const std::string& path) {
    if (table.rows.empty()) throw std::invalid_argument("emit_svg: empty table");
    const std::size_t xi = detail::column_index(table, spec.x_column);
    std::vector<std::size_t> yis;
    for (const auto& name : spec.y_columns) yis.push_back(detail::column_index(table, name));
    if (yis.empty()) throw std::invalid_argument("emit_svg: no y columns");

    auto transform = [](double v, bool log_axis) {
        if (!log_axis) return v;
        if (!(v > 0.0)) throw std::invalid_argument("emit_svg: log axis requires positive data");
        return std::log10(v);
    };

    const double width = 720.0, height = 480.0;
    const double ml = 70.0, mr = 160.0, mt = 40.0, mb = 50.0;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& row : table.rows) {
        const double x = transform(row[xi].as_number(), spec.log_x);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        for (std::size_t yi : yis) {
            const double y = transform(row[yi].as_number(), spec.log_y);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double xpad = 0.03 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
    xmin -= xpad, xmax += xpad, ymin -= ypad, ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << (spec.title.empty() ? spec.x_column : spec.title) << "</text>\n";

    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    const int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double fx = xmin + (xmax - xmin) * t / ticks;
        const double fy = ymin + (ymax - ymin) * t / ticks;
        svg << "<line x1=\"" << px(fx) << "\" y1=\"" << height - mb << "\" x2=\"" << px(fx)
            << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(fx) << "\" y=\"" << height - mb + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">"
            << detail::fmt_tick(spec.log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml << "\" y2=\""
            << py(fy) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">"
            << detail::fmt_tick(spec.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">" << spec.x_column
        << (spec.log_x ? " (log)" : "") << "</text>\n";

    for (std::size_t s = 0; s < yis.size(); ++s) {
        std::ostringstream points;
        for (const auto& row : table.rows) {
            const double x = transform(row[xi].as_number(), spec.log_x);
            const double y = transform(row[yis[s]].as_number(), spec.log_y);
            points << px(x) << "," << py(y) << " ";
        }
        const char* color = palette[s % 5];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\""
            << points.str() << "\"/>\n";
        for (const auto& row : table.rows) {
            const double x = transform(row[xi].as_number(), spec.log_x);
            const double y = transform(row[yis[s]].as_number(), spec.log_y);
            svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.6\" fill=\""
                << color << "\"/>\n";
        }
        svg << "<text x=\"" << width - mr + 12 << "\" y=\"" << mt + 16 + 18 * s
            << "\" font-size=\"12\" fill=\"" << color << "\">" << spec.y_columns[s]
            << (spec.log_y ? " (log)" : "") << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_svg: cannot open " + path);
    out << svg.str();
    if (!out) throw std::runtime_error("emit_svg: write failed for " + path);
}

}  // namespace fraceuler
