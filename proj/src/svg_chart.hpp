#pragma once

#include <string>
#include <vector>

namespace fz {

/// Minimal self-contained SVG line chart: axes, ticks, legend, one polyline
/// per series. No external assets or scripts.
struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgLineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;

    std::string render() const;
};

} // namespace fz
