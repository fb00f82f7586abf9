#pragma once

#include <string>
#include <vector>

namespace tapgrowth {

struct PlotPanel {
    std::string title;
    std::vector<double> x;
    std::vector<double> y;
    bool log_y = false;
};

// Static SVG with the panels stacked in a two-column grid. Coordinates are
// printed with fixed precision so identical input gives identical bytes.
std::string render_svg(const std::vector<PlotPanel>& panels);

}  // namespace tapgrowth
