#pragma once

#include <string>
#include <vector>

namespace arcspect::cli {

struct Series {
    std::string label;
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    bool markers = false;
};

struct Panel {
    std::string x_label, y_label;
    std::vector<Series> series;
    std::vector<double> vertical_lines;  // e.g. the ARC centre
};

/// Standalone SVG with the panels stacked vertically, each 640 x 300 px.
std::string line_plot(const std::string& title, const std::vector<Panel>& panels);

}  // namespace arcspect::cli
