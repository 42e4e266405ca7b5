#pragma once

// Coiflet-1 analysis filter bank. The six low-pass taps have the closed
// form {sqrt7-3, 1-sqrt7, 14-2*sqrt7, 14+2*sqrt7, 5+sqrt7, 1-sqrt7} / (16*sqrt2),
// which we evaluate directly rather than transcribing decimal tables.
// The high-pass taps follow from the quadrature-mirror relation
// g[i] = (-1)^i * h[5-i].

#include <array>
#include <cmath>

namespace bwc::wavelet {

struct CoifletFilter {
    std::array<double, 6> h;  // low-pass analysis taps
    std::array<double, 6> g;  // high-pass analysis taps
};

inline CoifletFilter coiflet1() {
    const double s7 = std::sqrt(7.0);
    const double c = 1.0 / (16.0 * std::sqrt(2.0));
    CoifletFilter f;
    f.h = {(s7 - 3.0) * c, (1.0 - s7) * c,        (14.0 - 2.0 * s7) * c,
           (14.0 + 2.0 * s7) * c, (5.0 + s7) * c, (1.0 - s7) * c};
    for (int i = 0; i < 6; ++i) f.g[i] = (i % 2 == 0 ? 1.0 : -1.0) * f.h[5 - i];
    return f;
}

}  // namespace bwc::wavelet
