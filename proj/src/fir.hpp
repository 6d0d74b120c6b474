#pragma once

#include <cstddef>
#include <vector>

#include "matrix.hpp"

namespace fz {

/// Linear-phase FIR bandpass: windowed-sinc difference of two ideal lowpass
/// responses under a Blackman window. Taps are exactly symmetric (the second
/// half mirrors the first) and normalized to unit gain at the geometric band
/// center sqrt(f_lo * f_hi).
struct FirFilter {
    std::vector<double> taps; // length order + 1, odd
    double f_lo = 0.0;
    double f_hi = 0.0;
    double fs = 0.0;

    std::size_t order() const noexcept { return taps.size() - 1; }
};

FirFilter design_bandpass_fir(std::size_t order, double f_lo, double f_hi, double fs);

/// Magnitude response |H(e^{j 2 pi f / fs})| evaluated directly from the taps.
double fir_gain_at(const FirFilter& f, double freq_hz);

/// Per-channel causal convolution with zero left-padding, then a left shift
/// by order/2 samples (group-delay compensation) with zero right-padding.
/// Output length equals input length; the first and last order/2 samples are
/// edge transients.
Matrix filter_signal(const Matrix& x, const FirFilter& f);

} // namespace fz
