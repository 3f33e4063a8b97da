#pragma once

#include <cstdint>
#include <vector>

#include "decn/fourier.hpp"

namespace decn::sampling {

using fourier::ComplexImage;
using fourier::KSpaceGrid;

enum class MaskPattern { Cartesian1D, Random2D, Full };

// Binary k-space sampling indicator, stored DC-centered (matching how
// published masks are displayed). Application to natural-order grids goes
// through kept_natural().
struct SamplingMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> kept;  // DC-centered, 1 = sampled
    double ratio = 0.0;              // achieved fraction, ones / (H*W)
    MaskPattern pattern = MaskPattern::Full;
    std::uint64_t seed = 0;

    bool at(int y, int x) const { return kept[static_cast<std::size_t>(y) * width + x] != 0; }

    // Indicator at natural (corner-DC) coordinates: the inverse of the
    // fftshift2 index map applied to the centered storage.
    bool kept_natural(int y, int x) const {
        const int cy = (y + (height + 1) / 2) % height;
        const int cx = (x + (width + 1) / 2) % width;
        return at(cy, cx);
    }

    std::size_t count_kept() const;
};

// Variable-density row sampling: keeps floor(center_fraction*H) rows nearest
// DC deterministically, then draws the remaining rows without replacement
// with keep weight (1 - r/r_max)^3 until floor(target_ratio*H) rows are kept.
SamplingMask make_cartesian_mask(int height, int width, double target_ratio, double center_fraction,
                                 std::uint64_t seed);

// Variable-density 2D point sampling: fully-sampled central disk of area
// center_fraction*H*W, then weighted draws without replacement until
// floor(target_ratio*H*W) points are kept.
SamplingMask make_random_mask(int height, int width, double target_ratio, double center_fraction,
                              std::uint64_t seed);

SamplingMask make_full_mask(int height, int width);

// F_u applied to an image: fft2 with entries zeroed where the mask is 0.
// Result stays on the full grid (natural order).
KSpaceGrid measure(const ComplexImage& x, const SamplingMask& mask);

// F_u^H y: re-projects y onto the mask support, then ifft2. The standard
// zero-filled reconstruction Z(y).
ComplexImage zero_fill(const KSpaceGrid& y, const SamplingMask& mask);

// Zero the entries of k outside the mask (k in natural order).
KSpaceGrid apply_mask(const KSpaceGrid& k, const SamplingMask& mask);

}  // namespace decn::sampling
