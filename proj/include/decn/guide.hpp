#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "decn/errornet.hpp"
#include "decn/fidelity.hpp"
#include "decn/fourier.hpp"
#include "decn/sampling.hpp"
#include "decn/wavelet.hpp"

namespace decn::guide {

using errornet::ConvLayer;
using errornet::Tensor;
using fourier::ComplexImage;
using fourier::KSpaceGrid;
using sampling::SamplingMask;

enum class GuideKind { ZeroFill, IstaWavelet, CascadeCnn };

const char* to_string(GuideKind k);
GuideKind guide_kind_from_string(const std::string& s);

// Proximal-gradient solver for the wavelet-sparsity objective
//   E(x) = 1/2 ||F_u x - y||^2 + sparsity_weight * sum_i |(Psi x)_i|
// with Psi the orthonormal Haar transform. The 1/2 data-term scaling matches
// the gradient step below, which is what makes E non-increasing per step.
struct IstaConfig {
    double sparsity_weight = 5e-3;
    int iterations = 100;
    double step_size = 1.0;  // must be <= 1: the data-term gradient is 1-Lipschitz
    int wavelet_levels = 3;
};

// Toy-scale cascaded CNN with interleaved data-fidelity layers. Paper-scale
// settings are blocks=4, convs_per_block=4, feature_maps=64; the defaults are
// scaled down for desk runs.
struct CascadeConfig {
    int blocks = 2;
    int convs_per_block = 4;
    int feature_maps = 32;
    double fidelity_alpha = 5e-5;
};

// Cascaded-CNN reconstruction model. Each block applies a conv stack with an
// identity shortcut and then a data-fidelity layer (the closed-form fusion
// with zero residual). Trains through errornet::train against ground truth.
class CascadeModel : public errornet::TrainableModel {
  public:
    CascadeModel(const CascadeConfig& cfg, std::uint64_t seed);
    CascadeModel(const CascadeConfig& cfg, std::vector<ConvLayer> layers);  // for loading

    const CascadeConfig& config() const { return cfg_; }
    const std::vector<ConvLayer>& layers() const { return layers_; }

    // Inference path; pure, safe to call concurrently.
    ComplexImage reconstruct(const KSpaceGrid& y, const SamplingMask& mask) const;

    std::vector<ConvLayer*> trainable_layers() override;
    ComplexImage predict(const errornet::TrainSample& s) override;
    void backprop(const ComplexImage& output_grad) override;
    const ComplexImage& train_target(const errornet::TrainSample& s) const override;

  private:
    struct Cache;
    ComplexImage run(const KSpaceGrid& y, const SamplingMask& mask, Cache* cache) const;

    CascadeConfig cfg_;
    std::vector<ConvLayer> layers_;  // blocks * convs_per_block, block-major
    std::unique_ptr<Cache> cache_;
};

// Pluggable guide: any of the inversion back ends behind one surface.
struct GuideSolver {
    GuideKind kind = GuideKind::ZeroFill;
    std::string identifier = "zero_fill";
    IstaConfig ista;
    CascadeConfig cascade;
    std::shared_ptr<CascadeModel> model;  // required when kind == CascadeCnn
};

// x_guide = invMRI(y): dispatches on solver kind. ZeroFill returns the plain
// zero-filled inversion; CascadeCnn requires loaded/trained weights.
ComplexImage reconstruct(const GuideSolver& solver, const KSpaceGrid& y, const SamplingMask& mask);

// One proximal-gradient step: gradient step on the data term, then soft
// thresholding of the Haar coefficients at step_size * sparsity_weight.
ComplexImage ista_step(const ComplexImage& x, const KSpaceGrid& y, const SamplingMask& mask, const IstaConfig& cfg);

// The objective E(x) the ISTA solver decreases (see IstaConfig).
double ista_objective(const ComplexImage& x, const KSpaceGrid& y, const SamplingMask& mask, const IstaConfig& cfg);

// Free-function form of the cascade inference pass.
ComplexImage cascade_forward(const CascadeModel& model, const KSpaceGrid& y, const SamplingMask& mask);

}  // namespace decn::guide
