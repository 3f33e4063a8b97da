#include "decn/wavelet.hpp"

#include <cmath>
#include <vector>

namespace decn::guide {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_divisible(int h, int w, int levels) {
    if (levels <= 0) throw DimensionError("haar: levels must be positive");
    const int f = 1 << levels;
    if (h % f != 0 || w % f != 0) throw DimensionError("haar: dimensions not divisible by 2^levels");
}

// One analysis level on the top-left (h x w) block.
void analyze_level(ComplexImage& a, int h, int w) {
    std::vector<fourier::cplx> tmp(std::max(h, w));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w / 2; ++x) {
            const auto lo = (a.at(y, 2 * x) + a.at(y, 2 * x + 1)) * kInvSqrt2;
            const auto hi = (a.at(y, 2 * x) - a.at(y, 2 * x + 1)) * kInvSqrt2;
            tmp[x] = lo;
            tmp[w / 2 + x] = hi;
        }
        for (int x = 0; x < w; ++x) a.at(y, x) = tmp[x];
    }
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h / 2; ++y) {
            const auto lo = (a.at(2 * y, x) + a.at(2 * y + 1, x)) * kInvSqrt2;
            const auto hi = (a.at(2 * y, x) - a.at(2 * y + 1, x)) * kInvSqrt2;
            tmp[y] = lo;
            tmp[h / 2 + y] = hi;
        }
        for (int y = 0; y < h; ++y) a.at(y, x) = tmp[y];
    }
}

void synthesize_level(ComplexImage& a, int h, int w) {
    std::vector<fourier::cplx> tmp(std::max(h, w));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h / 2; ++y) {
            const auto lo = a.at(y, x);
            const auto hi = a.at(h / 2 + y, x);
            tmp[2 * y] = (lo + hi) * kInvSqrt2;
            tmp[2 * y + 1] = (lo - hi) * kInvSqrt2;
        }
        for (int y = 0; y < h; ++y) a.at(y, x) = tmp[y];
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w / 2; ++x) {
            const auto lo = a.at(y, x);
            const auto hi = a.at(y, w / 2 + x);
            tmp[2 * x] = (lo + hi) * kInvSqrt2;
            tmp[2 * x + 1] = (lo - hi) * kInvSqrt2;
        }
        for (int x = 0; x < w; ++x) a.at(y, x) = tmp[x];
    }
}

}  // namespace

ComplexImage haar_dwt2(const ComplexImage& img, int levels) {
    check_divisible(img.height, img.width, levels);
    ComplexImage out = img;
    int h = img.height, w = img.width;
    for (int l = 0; l < levels; ++l) {
        analyze_level(out, h, w);
        h /= 2;
        w /= 2;
    }
    return out;
}

ComplexImage haar_idwt2(const ComplexImage& coeffs, int levels) {
    check_divisible(coeffs.height, coeffs.width, levels);
    ComplexImage out = coeffs;
    for (int l = levels - 1; l >= 0; --l) {
        synthesize_level(out, coeffs.height >> l, coeffs.width >> l);
    }
    return out;
}

}  // namespace decn::guide
