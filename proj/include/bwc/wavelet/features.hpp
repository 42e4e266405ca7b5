#pragma once

// Feature extraction stage of the hybrid model: every rectified feature-map
// row is run through one level of the Coiflet-1 transform and only the
// approximation coefficients are kept, halving each row. The per-row
// coefficient blocks are concatenated into a single flat feature vector.

#include <vector>

#include "bwc/conv/frontend.hpp"
#include "bwc/wavelet/dwt.hpp"

namespace bwc::wavelet {

inline std::size_t approx_length(std::size_t row_length) {
    return (row_length + 1) / 2;
}

// Row-wise approximation coefficients, rows kept separate.
inline std::vector<std::vector<double>> extract_feature_rows(const conv::FeatureMap& fm,
                                                             const CoifletFilter& f) {
    std::vector<std::vector<double>> rows;
    rows.reserve(fm.rows.size());
    for (const auto& row : fm.rows) {
        rows.push_back(dwt_single_level(row, f).approx);
    }
    return rows;
}

inline std::vector<double> extract_features(const conv::FeatureMap& fm, const CoifletFilter& f) {
    std::vector<double> features;
    for (auto& row : extract_feature_rows(fm, f)) {
        features.insert(features.end(), row.begin(), row.end());
    }
    return features;
}

}  // namespace bwc::wavelet
