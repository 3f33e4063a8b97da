#pragma once

#include <complex>
#include <vector>

#include "decn/errors.hpp"

namespace decn::fourier {

using cplx = std::complex<double>;

// Row-major grid of complex image samples.
struct ComplexImage {
    int height = 0;
    int width = 0;
    std::vector<cplx> data;

    ComplexImage() = default;
    ComplexImage(int h, int w) : height(h), width(w) {
        if (h <= 0 || w <= 0) throw DimensionError("ComplexImage: dimensions must be positive");
        data.assign(static_cast<std::size_t>(h) * w, cplx(0.0, 0.0));
    }

    cplx& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
    const cplx& at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }
};

// Row-major grid of complex Fourier coefficients. dc_centered records whether
// the zero-frequency coefficient sits at the grid center (mask convention) or
// at (0,0) (natural transform order).
struct KSpaceGrid {
    int height = 0;
    int width = 0;
    std::vector<cplx> data;
    bool dc_centered = false;

    KSpaceGrid() = default;
    KSpaceGrid(int h, int w, bool centered = false) : height(h), width(w), dc_centered(centered) {
        if (h <= 0 || w <= 0) throw DimensionError("KSpaceGrid: dimensions must be positive");
        data.assign(static_cast<std::size_t>(h) * w, cplx(0.0, 0.0));
    }

    cplx& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
    const cplx& at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }
};

// Index the natural-order DC coefficient lands on after fftshift2 along an
// axis of length n. Even n: n/2. Mask generation and mask application both
// use this so the two conventions cannot drift apart.
inline int dc_index(int n) { return ((n + 1) / 2) % n; }

inline void check_same_shape(int h1, int w1, int h2, int w2, const char* what) {
    if (h1 != h2 || w1 != w2) throw DimensionError(std::string(what) + ": shape mismatch");
}

inline ComplexImage add(const ComplexImage& a, const ComplexImage& b) {
    check_same_shape(a.height, a.width, b.height, b.width, "add");
    ComplexImage out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

inline ComplexImage sub(const ComplexImage& a, const ComplexImage& b) {
    check_same_shape(a.height, a.width, b.height, b.width, "sub");
    ComplexImage out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

inline ComplexImage scale(const ComplexImage& a, double s) {
    ComplexImage out = a;
    for (auto& z : out.data) z *= s;
    return out;
}

// Sum of squared moduli.
inline double norm2(const ComplexImage& a) {
    double s = 0.0;
    for (const auto& z : a.data) s += std::norm(z);
    return s;
}

// Unitary 2D DFT, natural (corner-DC) output ordering. Both directions scale
// by 1/sqrt(H*W) so fft2/ifft2 are exact adjoints and Parseval holds.
KSpaceGrid fft2(const ComplexImage& img);

// Exact inverse and adjoint of fft2.
ComplexImage ifft2(const KSpaceGrid& k);

// Quadrant swap moving DC between corner and center; toggles dc_centered.
// new[(i + ceil(H/2)) mod H][(j + ceil(W/2)) mod W] = old[i][j].
KSpaceGrid fftshift2(const KSpaceGrid& k);

}  // namespace decn::fourier
