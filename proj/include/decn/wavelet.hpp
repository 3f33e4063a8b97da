#pragma once

#include "decn/fourier.hpp"

namespace decn::guide {

using fourier::ComplexImage;

// Orthonormal multi-level 2D Haar transform. Subbands are packed in place:
// after each level the low-pass quadrant occupies the top-left block and the
// next level recurses on it. Perfect reconstruction and Parseval hold to
// machine precision. Dimensions must be divisible by 2^levels.
ComplexImage haar_dwt2(const ComplexImage& img, int levels);
ComplexImage haar_idwt2(const ComplexImage& coeffs, int levels);

}  // namespace decn::guide
