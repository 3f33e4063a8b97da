#pragma once

#include "decn/fourier.hpp"
#include "decn/sampling.hpp"

namespace decn::fidelity {

using fourier::ComplexImage;
using fourier::KSpaceGrid;
using sampling::SamplingMask;

// Tikhonov weight pulling the solution toward the corrected template. Must be
// positive: with alpha = 0 the unsampled frequencies are unconstrained.
struct FidelityWeight {
    double alpha = 5e-5;
};

// Closed-form minimizer of ||F_u x - y||^2 + alpha ||x - t||^2 with
// t = guide + residual_estimate, solved pointwise in k-space:
//   X(j) = (M(j) y(j) + alpha T(j)) / (M(j) + alpha).
// Unsampled locations pass T(j) through exactly; sampled locations blend
// (y + alpha T) / (1 + alpha).
ComplexImage fuse(const KSpaceGrid& y, const SamplingMask& mask, const ComplexImage& guide,
                  const ComplexImage& residual_estimate, FidelityWeight alpha);

// Independent check on fuse(): conjugate gradients on the normal equations
//   (F_u^H F_u + alpha I) x = F_u^H y + alpha t
// applied as image-domain operators, never using the pointwise rule. The
// operator is Hermitian positive definite with spectrum in [alpha, 1+alpha].
ComplexImage fuse_oracle_cg(const KSpaceGrid& y, const SamplingMask& mask, const ComplexImage& t,
                            FidelityWeight alpha, double tol = 1e-12, int max_iters = 10000);

// Evaluates ||F_u x - y||^2 + alpha ||x - t||^2.
double fusion_objective(const ComplexImage& x, const KSpaceGrid& y, const SamplingMask& mask, const ComplexImage& t,
                        FidelityWeight alpha);

}  // namespace decn::fidelity
