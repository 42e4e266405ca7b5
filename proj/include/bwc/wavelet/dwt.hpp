#pragma once

// Single-level discrete wavelet transform with periodic boundary extension.
// Odd-length inputs are periodically padded by one sample first, so the
// coefficient count is always exactly half the (padded) length. For
// even-length inputs the analysis/synthesis pair reconstructs perfectly.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "bwc/wavelet/coiflet.hpp"

namespace bwc::wavelet {

struct InputTooShort : std::runtime_error {
    InputTooShort() : std::runtime_error("dwt input must have at least 2 samples") {}
};

struct LengthMismatch : std::runtime_error {
    LengthMismatch() : std::runtime_error("approx/detail coefficient lengths differ") {}
};

struct WaveletCoefficients {
    std::vector<double> approx;
    std::vector<double> detail;
    std::size_t original_length = 0;  // before any periodic padding
};

inline WaveletCoefficients dwt_single_level(std::span<const double> x, const CoifletFilter& f) {
    if (x.size() < 2) throw InputTooShort();
    WaveletCoefficients out;
    out.original_length = x.size();

    const std::size_t m = x.size() + (x.size() % 2);  // padded length
    const std::size_t half = m / 2;
    out.approx.resize(half);
    out.detail.resize(half);

    auto at = [&](std::size_t i) { return x[i % x.size()]; };  // pad sample m-1 wraps to x[0]
    for (std::size_t k = 0; k < half; ++k) {
        double a = 0.0;
        double d = 0.0;
        for (std::size_t i = 0; i < 6; ++i) {
            const double v = at((2 * k + i) % m);
            a += f.h[i] * v;
            d += f.g[i] * v;
        }
        out.approx[k] = a;
        out.detail[k] = d;
    }
    return out;
}

// Inverse of dwt_single_level for even original lengths (the analysis
// operator is orthogonal under periodic extension, so its transpose
// inverts it). Returns the padded-length signal when the input was odd.
inline std::vector<double> idwt_single_level(const WaveletCoefficients& c,
                                             const CoifletFilter& f) {
    if (c.approx.size() != c.detail.size()) throw LengthMismatch();
    const std::size_t m = 2 * c.approx.size();
    std::vector<double> x(m, 0.0);
    for (std::size_t k = 0; k < c.approx.size(); ++k) {
        for (std::size_t i = 0; i < 6; ++i) {
            x[(2 * k + i) % m] += f.h[i] * c.approx[k] + f.g[i] * c.detail[k];
        }
    }
    return x;
}

}  // namespace bwc::wavelet
