#include "fir.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace fz {

namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = M_PI * x;
    return std::sin(px) / px;
}

} // namespace

FirFilter design_bandpass_fir(std::size_t order, double f_lo, double f_hi, double fs) {
    if (order < 2 || order % 2 != 0) {
        throw DomainError("design_bandpass_fir: order must be even and >= 2, got " +
                          std::to_string(order));
    }
    if (!(0.0 < f_lo && f_lo < f_hi && f_hi < fs / 2.0)) {
        throw DomainError("design_bandpass_fir: need 0 < f_lo < f_hi < fs/2, got [" +
                          std::to_string(f_lo) + ", " + std::to_string(f_hi) + "] at fs=" +
                          std::to_string(fs));
    }

    const std::size_t n_taps = order + 1;
    const std::size_t mid = order / 2;
    FirFilter filt;
    filt.taps.assign(n_taps, 0.0);
    filt.f_lo = f_lo;
    filt.f_hi = f_hi;
    filt.fs = fs;

    // Compute the first half and mirror it so symmetry holds bit-exactly.
    const double w_lo = 2.0 * f_lo / fs;
    const double w_hi = 2.0 * f_hi / fs;
    for (std::size_t n = 0; n <= mid; ++n) {
        const double k = static_cast<double>(n) - static_cast<double>(mid);
        const double ideal = w_hi * sinc(w_hi * k) - w_lo * sinc(w_lo * k);
        const double phase = 2.0 * M_PI * static_cast<double>(n) / static_cast<double>(order);
        const double window = 0.42 - 0.5 * std::cos(phase) + 0.08 * std::cos(2.0 * phase);
        filt.taps[n] = ideal * window;
        filt.taps[order - n] = filt.taps[n];
    }

    const double center_gain = fir_gain_at(filt, std::sqrt(f_lo * f_hi));
    if (!(center_gain > 0.0)) {
        throw NumericError("design_bandpass_fir: degenerate band-center gain");
    }
    for (double& t : filt.taps) t /= center_gain;
    return filt;
}

double fir_gain_at(const FirFilter& f, double freq_hz) {
    const double w = 2.0 * M_PI * freq_hz / f.fs;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < f.taps.size(); ++n) {
        re += f.taps[n] * std::cos(w * static_cast<double>(n));
        im -= f.taps[n] * std::sin(w * static_cast<double>(n));
    }
    return std::hypot(re, im);
}

Matrix filter_signal(const Matrix& x, const FirFilter& f) {
    const std::size_t order = f.order();
    const std::size_t samples = x.cols();
    if (samples <= order) {
        throw DomainError("filter_signal: need more than " + std::to_string(order) +
                          " samples, got " + std::to_string(samples));
    }
    const std::size_t delay = order / 2;
    Matrix y(x.rows(), samples, 0.0);
    for (std::size_t ch = 0; ch < x.rows(); ++ch) {
        const double* in = x.row_ptr(ch);
        double* out = y.row_ptr(ch);
        // y_causal[t] = sum_k taps[k] * x[t-k]; written at t - delay.
        for (std::size_t t = 0; t < samples; ++t) {
            double acc = 0.0;
            const std::size_t k_max = std::min(t, order);
            for (std::size_t k = 0; k <= k_max; ++k) acc += f.taps[k] * in[t - k];
            if (t >= delay) out[t - delay] = acc;
        }
        // Trailing delay samples stay zero-padded.
    }
    return y;
}

} // namespace fz
