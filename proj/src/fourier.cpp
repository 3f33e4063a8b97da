#include "decn/fourier.hpp"

#include <cmath>
#include <numbers>

namespace decn::fourier {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey, unnormalized, forward sign (-i).
void fft_radix2(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx w = std::polar(1.0, ang * static_cast<double>(k));
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

// Bluestein chirp-z for arbitrary length, unnormalized forward DFT.
// X_j = c_j * (a (*) b)_j with a_k = x_k c_k, c_k = exp(-i pi k^2 / n),
// b_k = conj(c_k) embedded circularly. k^2 is reduced mod 2n before the
// angle is formed; the chirp has period 2n so this keeps angles small.
void fft_bluestein(std::vector<cplx>& x) {
    const std::size_t n = x.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        chirp[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n));
    }

    std::vector<cplx> a(m, cplx(0, 0)), b(m, cplx(0, 0));
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);

    fft_radix2(a);
    fft_radix2(b);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    // Unnormalized inverse via conjugation.
    for (auto& v : a) v = std::conj(v);
    fft_radix2(a);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) x[j] = std::conj(a[j]) * inv_m * chirp[j];
}

void fft1d(std::vector<cplx>& a, bool inverse) {
    if (inverse) {
        for (auto& v : a) v = std::conj(v);
    }
    if (is_pow2(a.size())) {
        fft_radix2(a);
    } else {
        fft_bluestein(a);
    }
    if (inverse) {
        for (auto& v : a) v = std::conj(v);
    }
}

// Shared row/column pass; scale applies the unitary normalization once.
void transform2d(const std::vector<cplx>& in, std::vector<cplx>& out, int h, int w, bool inverse) {
    out.resize(in.size());
    std::vector<cplx> row(w);
    for (int y = 0; y < h; ++y) {
        std::copy(in.begin() + static_cast<std::size_t>(y) * w, in.begin() + static_cast<std::size_t>(y + 1) * w,
                  row.begin());
        fft1d(row, inverse);
        std::copy(row.begin(), row.end(), out.begin() + static_cast<std::size_t>(y) * w);
    }
    std::vector<cplx> col(h);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) col[y] = out[static_cast<std::size_t>(y) * w + x];
        fft1d(col, inverse);
        for (int y = 0; y < h; ++y) out[static_cast<std::size_t>(y) * w + x] = col[y];
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(h) * static_cast<double>(w));
    for (auto& v : out) v *= scale;
}

}  // namespace

KSpaceGrid fft2(const ComplexImage& img) {
    if (img.height <= 0 || img.width <= 0 || img.data.size() != static_cast<std::size_t>(img.height) * img.width)
        throw DimensionError("fft2: empty or inconsistent image");
    KSpaceGrid k(img.height, img.width, false);
    transform2d(img.data, k.data, img.height, img.width, false);
    return k;
}

ComplexImage ifft2(const KSpaceGrid& k) {
    if (k.height <= 0 || k.width <= 0 || k.data.size() != static_cast<std::size_t>(k.height) * k.width)
        throw DimensionError("ifft2: grid data does not match declared dimensions");
    ComplexImage img(k.height, k.width);
    transform2d(k.data, img.data, k.height, k.width, true);
    return img;
}

KSpaceGrid fftshift2(const KSpaceGrid& k) {
    KSpaceGrid out(k.height, k.width, !k.dc_centered);
    const int sy = (k.height + 1) / 2;
    const int sx = (k.width + 1) / 2;
    for (int y = 0; y < k.height; ++y) {
        const int ny = (y + sy) % k.height;
        for (int x = 0; x < k.width; ++x) {
            out.at(ny, (x + sx) % k.width) = k.at(y, x);
        }
    }
    return out;
}

}  // namespace decn::fourier
