#pragma once

#include <string>
#include <vector>

namespace qsense {

/// One named curve of a line plot.
struct SvgSeries {
    std::string name;
    std::string color;  // any SVG color
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal native line-plot emission (axes, ticks, legend). The CSVs next
/// to it are the authoritative outputs; this is a convenience rendering.
std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<SvgSeries>& series);

/// Heatmap of a row-major matrix with per-cell value annotations
/// (confusion-matrix rendering).
std::string render_heatmap(const std::string& title, const std::vector<std::string>& row_labels,
                           const std::vector<std::string>& col_labels,
                           const std::vector<std::vector<double>>& values);

/// Write-to-temp-then-rename file emission.
void write_svg(const std::string& svg, const std::string& path);

}  // namespace qsense
