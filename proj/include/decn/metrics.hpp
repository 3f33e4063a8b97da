#pragma once

#include <vector>

#include "decn/fourier.hpp"

namespace decn::metrics {

using fourier::ComplexImage;

struct QualityScore {
    double psnr_db = 0.0;  // +inf sentinel for identical inputs
    double ssim = 0.0;
};

// PSNR on magnitude images with peak value 1 (references are normalized to
// unit peak): 10*log10(1/MSE). Identical inputs return +infinity.
double psnr(const ComplexImage& reference, const ComplexImage& test);

// Mean local SSIM on magnitude images: 11x11 Gaussian window, sigma 1.5,
// C1=(0.01*L)^2, C2=(0.03*L)^2, L=1, valid-region windows only.
double ssim(const ComplexImage& reference, const ComplexImage& test);

QualityScore score(const ComplexImage& reference, const ComplexImage& test);

// Nonnegative real-valued map.
struct RealMap {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    double at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Where the guide is less accurate than plain zero-filling:
// m_d = max(0, |x_fs - guide| - |x_fs - zf|) pointwise on complex-difference
// magnitudes.
RealMap filtered_diff_map(const ComplexImage& x_fs, const ComplexImage& guide, const ComplexImage& zf);

}  // namespace decn::metrics
