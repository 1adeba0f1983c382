#include "qsense/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qsense/errors.hpp"

namespace qsense {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 440;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 130;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

}  // namespace

std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<SvgSeries>& series) {
    double x_lo = std::numeric_limits<double>::max(), x_hi = std::numeric_limits<double>::lowest();
    double y_lo = x_lo, y_hi = x_hi;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw BadRange("render_line_plot: series x/y lengths differ");
        for (double v : s.x) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
        for (double v : s.y) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
    }
    if (!(x_lo <= x_hi) || !(y_lo <= y_hi))
        throw BadRange("render_line_plot: no data points");
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_hi = y_lo + 1.0;
    const double pw = kWidth - kMarginLeft - kMarginRight;
    const double ph = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + pw * (x - x_lo) / (x_hi - x_lo); };
    auto py = [&](double y) { return kMarginTop + ph * (1.0 - (y - y_lo) / (y_hi - y_lo)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title) << "</text>\n";

    // Axes and ticks.
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = x_lo + (x_hi - x_lo) * i / 5.0;
        const double fy = y_lo + (y_hi - y_lo) * i / 5.0;
        svg << "<line x1=\"" << px(fx) << "\" y1=\"" << kMarginTop + ph << "\" x2=\"" << px(fx)
            << "\" y2=\"" << kMarginTop + ph + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << px(fx) << "\" y=\"" << kMarginTop + ph + 18
            << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n"
            << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py(fy) << "\" x2=\""
            << kMarginLeft << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
    }
    svg << "<text x=\"" << kMarginLeft + pw / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << kMarginTop + ph / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << kMarginTop + ph / 2
        << ")\">" << escape(y_label) << "</text>\n";

    // Curves and legend.
    int legend_row = 0;
    for (const auto& s : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        svg << "\"/>\n";
        const int ly = kMarginTop + 10 + 18 * legend_row++;
        svg << "<line x1=\"" << kWidth - kMarginRight + 10 << "\" y1=\"" << ly << "\" x2=\""
            << kWidth - kMarginRight + 30 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kWidth - kMarginRight + 35 << "\" y=\"" << ly + 4 << "\">"
            << escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render_heatmap(const std::string& title, const std::vector<std::string>& row_labels,
                           const std::vector<std::string>& col_labels,
                           const std::vector<std::vector<double>>& values) {
    const std::size_t nr = values.size();
    if (nr == 0 || row_labels.size() != nr)
        throw BadRange("render_heatmap: row labels do not match value rows");
    const std::size_t nc = values.front().size();
    for (const auto& row : values)
        if (row.size() != nc) throw BadRange("render_heatmap: ragged value rows");
    if (col_labels.size() != nc)
        throw BadRange("render_heatmap: column labels do not match value columns");

    double v_hi = 0.0;
    for (const auto& row : values)
        for (double v : row) v_hi = std::max(v_hi, v);
    if (v_hi <= 0.0) v_hi = 1.0;

    const double cell = 64.0;
    const double left = 120.0, top = 60.0;
    const double width = left + cell * static_cast<double>(nc) + 30.0;
    const double height = top + cell * static_cast<double>(nr) + 70.0;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title) << "</text>\n";
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            const double frac = values[i][j] / v_hi;
            const int blue = static_cast<int>(255.0 * (1.0 - 0.85 * frac));
            const double x = left + cell * static_cast<double>(j);
            const double y = top + cell * static_cast<double>(i);
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"rgb(" << blue << ',' << blue
                << ",255)\" stroke=\"gray\"/>\n"
                << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                << "\" text-anchor=\"middle\" fill=\"" << (frac > 0.6 ? "white" : "black")
                << "\">" << fmt(values[i][j]) << "</text>\n";
        }
        svg << "<text x=\"" << left - 8 << "\" y=\""
            << top + cell * static_cast<double>(i) + cell / 2 + 4
            << "\" text-anchor=\"end\">" << escape(row_labels[i]) << "</text>\n";
    }
    for (std::size_t j = 0; j < nc; ++j)
        svg << "<text x=\"" << left + cell * static_cast<double>(j) + cell / 2 << "\" y=\""
            << top + cell * static_cast<double>(nr) + 18 << "\" text-anchor=\"middle\">"
            << escape(col_labels[j]) << "</text>\n";
    svg << "<text x=\"" << left + cell * static_cast<double>(nc) / 2 << "\" y=\""
        << top + cell * static_cast<double>(nr) + 44
        << "\" text-anchor=\"middle\">predicted class</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_svg(const std::string& svg, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw IoError("write_svg: cannot open " + tmp);
        f << svg;
        if (!f) throw IoError("write_svg: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("write_svg: rename to " + path + " failed");
}

}  // namespace qsense
