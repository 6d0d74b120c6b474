#include "svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "error.hpp"

namespace fz {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 46.0;
constexpr double kBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Tick step rounded to a 1/2/5 x 10^k grid.
double nice_step(double range, int target_ticks) {
    if (range <= 0.0) return 1.0;
    const double raw = range / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm <= 1.0) step = 1.0;
    else if (norm <= 2.0) step = 2.0;
    else if (norm <= 5.0) step = 5.0;
    return step * mag;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range data_range(const std::vector<SvgSeries>& series, bool x_axis) {
    Range r{1e300, -1e300};
    for (const SvgSeries& s : series) {
        const std::vector<double>& vals = x_axis ? s.x : s.y;
        for (double v : vals) {
            r.lo = std::min(r.lo, v);
            r.hi = std::max(r.hi, v);
        }
    }
    if (r.lo > r.hi) return {0.0, 1.0};
    if (r.lo == r.hi) {
        r.lo -= 0.5;
        r.hi += 0.5;
    }
    return r;
}

} // namespace

std::string SvgLineChart::render() const {
    if (series.empty()) throw DomainError("svg chart: no series to plot");
    for (const SvgSeries& s : series) {
        if (s.x.size() != s.y.size() || s.x.empty()) {
            throw DomainError("svg chart: series '" + s.name + "' has mismatched or empty data");
        }
    }

    const Range xr = data_range(series, true);
    const Range yr = data_range(series, false);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto sy = [&](double v) { return kTop + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth)
        << "\" height=\"" << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth) << " "
        << fmt(kHeight) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(title) << "</text>\n";

    // Grid and ticks.
    const double x_step = nice_step(xr.hi - xr.lo, 6);
    const double y_step = nice_step(yr.hi - yr.lo, 5);
    svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double v = std::ceil(xr.lo / x_step) * x_step; v <= xr.hi + 1e-9 * x_step; v += x_step) {
        const double px = sx(v);
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << fmt(kTop + plot_h) << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    }
    for (double v = std::ceil(yr.lo / y_step) * y_step; v <= yr.hi + 1e-9 * y_step; v += y_step) {
        const double py = sy(v);
        svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py) << "\" x2=\""
            << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(py) << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py + 4)
            << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
    svg << "</g>\n";

    // Axes.
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\""
        << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(kTop + plot_h)
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(kTop + plot_h) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape_xml(x_label) << "</text>\n"
        << "<text x=\"20\" y=\"" << fmt(kTop + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << fmt(kTop + plot_h / 2) << ")\">"
        << escape_xml(y_label) << "</text>\n";

    // Series.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const SvgSeries& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) svg << " ";
            svg << fmt(sx(s.x[i])) << "," << fmt(sy(s.y[i]));
        }
        svg << "\"/>\n";
    }

    // Legend.
    svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const double ly = kTop + 10 + 18 * static_cast<double>(si);
        svg << "<line x1=\"" << fmt(kLeft + plot_w - 150) << "\" y1=\"" << fmt(ly) << "\" x2=\""
            << fmt(kLeft + plot_w - 126) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << fmt(kLeft + plot_w - 120) << "\" y=\"" << fmt(ly + 4) << "\">"
            << escape_xml(series[si].name) << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace fz
