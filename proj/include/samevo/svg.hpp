#pragma once

#include <string>
#include <vector>

namespace samevo {

struct SvgSeries {
    std::string label;
    std::string color;  // any CSS color
    std::vector<double> mean;
    std::vector<double> half_width;  // empty, or aligned with mean
};

// Self-contained SVG line chart: shaded mean +- half_width bands, axes with
// ticks, and a legend. Output is byte-deterministic for given input.
std::string render_line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<SvgSeries>& series);

} // namespace samevo
