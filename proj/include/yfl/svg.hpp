#pragma once

#include <string>
#include <vector>

namespace yfl {

struct PlotLine {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Self-contained SVG line chart. `comment` is embedded verbatim as an XML
/// comment (used for the config hash). Non-finite points are dropped.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::vector<PlotLine>& lines, const std::string& comment = {},
                           bool log_y = false);

}  // namespace yfl
