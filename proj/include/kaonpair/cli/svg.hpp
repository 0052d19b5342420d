#pragma once

#include <span>
#include <string>
#include <vector>

namespace kaonpair::cli {

enum class LineStyle { solid, dashed, dotted };

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    LineStyle style = LineStyle::solid;
};

/// Minimal line plot: linear axes with ticks, one polyline per series, legend.
struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;

    std::string render(int width = 720, int height = 480) const;
};

} // namespace kaonpair::cli
