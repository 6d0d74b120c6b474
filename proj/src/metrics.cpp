#include "metrics.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"

namespace fz {

std::vector<double> smooth_curve(std::span<const double> series, std::size_t width) {
    if (width < 1) throw DomainError("smooth_curve: width must be >= 1");
    if (series.size() < width) {
        throw DomainError("smooth_curve: series of length " + std::to_string(series.size()) +
                          " shorter than window " + std::to_string(width));
    }
    std::vector<double> out(series.size() - width + 1);
    const double inv_w = 1.0 / static_cast<double>(width);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < width; ++j) acc += series[i + j];
        out[i] = acc * inv_w;
    }
    return out;
}

double median_window(std::span<const double> series, std::size_t lo_epoch,
                     std::size_t hi_epoch) {
    if (lo_epoch < 1 || lo_epoch >= hi_epoch || hi_epoch > series.size()) {
        throw DomainError("median_window: range [" + std::to_string(lo_epoch) + ", " +
                          std::to_string(hi_epoch) + "] invalid for series of length " +
                          std::to_string(series.size()));
    }
    std::vector<double> window(series.begin() + static_cast<std::ptrdiff_t>(lo_epoch - 1),
                               series.begin() + static_cast<std::ptrdiff_t>(hi_epoch));
    std::sort(window.begin(), window.end());
    const std::size_t n = window.size();
    if (n % 2 == 1) return window[n / 2];
    return 0.5 * (window[n / 2 - 1] + window[n / 2]);
}

} // namespace fz
