#include "decn/guide.hpp"

#include <cmath>

namespace decn::guide {

using errornet::Activation;
using errornet::to_image;
using errornet::to_tensor;

const char* to_string(GuideKind k) {
    switch (k) {
        case GuideKind::ZeroFill: return "zero_fill";
        case GuideKind::IstaWavelet: return "ista";
        case GuideKind::CascadeCnn: return "cascade";
    }
    return "zero_fill";
}

GuideKind guide_kind_from_string(const std::string& s) {
    if (s == "zero_fill") return GuideKind::ZeroFill;
    if (s == "ista") return GuideKind::IstaWavelet;
    if (s == "cascade") return GuideKind::CascadeCnn;
    throw ParameterError("unknown guide kind: " + s);
}

namespace {

void check_ista(const IstaConfig& cfg) {
    if (!(cfg.step_size > 0.0 && cfg.step_size <= 1.0))
        throw ParameterError("ista: step_size must lie in (0, 1]");
    if (cfg.iterations < 0 || cfg.wavelet_levels <= 0) throw ParameterError("ista: bad iteration/level counts");
    if (cfg.sparsity_weight < 0.0) throw ParameterError("ista: sparsity_weight must be nonnegative");
}

// Complex soft shrinkage: prox of tau * |.| on the modulus.
fourier::cplx shrink(fourier::cplx z, double tau) {
    const double m = std::abs(z);
    if (m <= tau) return {0.0, 0.0};
    return z * ((m - tau) / m);
}

// x - step * F_u^H (F_u x - y)
ComplexImage data_gradient_step(const ComplexImage& x, const KSpaceGrid& y, const SamplingMask& mask, double step) {
    KSpaceGrid k = fourier::fft2(x);
    for (int yy = 0; yy < k.height; ++yy) {
        for (int xx = 0; xx < k.width; ++xx) {
            if (mask.kept_natural(yy, xx)) {
                k.at(yy, xx) -= y.at(yy, xx);
            } else {
                k.at(yy, xx) = {0.0, 0.0};
            }
        }
    }
    ComplexImage g = fourier::ifft2(k);
    ComplexImage out = x;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= step * g.data[i];
    return out;
}

}  // namespace

ComplexImage ista_step(const ComplexImage& x, const KSpaceGrid& y, const SamplingMask& mask, const IstaConfig& cfg) {
    check_ista(cfg);
    fourier::check_same_shape(x.height, x.width, mask.height, mask.width, "ista_step");
    ComplexImage xg = data_gradient_step(x, y, mask, cfg.step_size);
    const double tau = cfg.step_size * cfg.sparsity_weight;
    if (tau == 0.0) return xg;  // prox is the identity
    ComplexImage c = haar_dwt2(xg, cfg.wavelet_levels);
    for (auto& z : c.data) z = shrink(z, tau);
    return haar_idwt2(c, cfg.wavelet_levels);
}

double ista_objective(const ComplexImage& x, const KSpaceGrid& y, const SamplingMask& mask, const IstaConfig& cfg) {
    KSpaceGrid k = fourier::fft2(x);
    double data = 0.0;
    for (int yy = 0; yy < k.height; ++yy) {
        for (int xx = 0; xx < k.width; ++xx) {
            if (mask.kept_natural(yy, xx)) data += std::norm(k.at(yy, xx) - y.at(yy, xx));
        }
    }
    double l1 = 0.0;
    if (cfg.sparsity_weight > 0.0) {
        ComplexImage c = haar_dwt2(x, cfg.wavelet_levels);
        for (const auto& z : c.data) l1 += std::abs(z);
    }
    return 0.5 * data + cfg.sparsity_weight * l1;
}

// ----------------------------------------------------------------------------
// Cascade model

struct CascadeModel::Cache {
    KSpaceGrid y;
    const SamplingMask* mask = nullptr;
    std::vector<Tensor> block_in;               // per block, 2-channel input
    std::vector<std::vector<Tensor>> acts;      // per block, per layer output
};

namespace {

std::vector<ConvLayer> build_cascade_layers(const CascadeConfig& cfg, std::uint64_t seed) {
    if (cfg.blocks <= 0 || cfg.convs_per_block < 2)
        throw ParameterError("cascade: need at least one block and two convs per block");
    if (cfg.feature_maps <= 0) throw ParameterError("cascade: feature_maps must be positive");
    std::vector<ConvLayer> layers;
    layers.reserve(static_cast<std::size_t>(cfg.blocks) * cfg.convs_per_block);
    CounterRng rng = CounterRng(seed).stream(0xca5c);
    for (int b = 0; b < cfg.blocks; ++b) {
        layers.emplace_back(2, cfg.feature_maps, Activation::ReLU);
        for (int i = 1; i < cfg.convs_per_block - 1; ++i)
            layers.emplace_back(cfg.feature_maps, cfg.feature_maps, Activation::ReLU);
        layers.emplace_back(cfg.feature_maps, 2, Activation::Identity);
    }
    for (auto& l : layers) l.init_xavier(rng);
    return layers;
}

// Adjoint of the data-fidelity layer: scale sampled frequencies by
// alpha/(1+alpha), pass unsampled through (the layer is F^H D F with D real).
ComplexImage fidelity_adjoint(const ComplexImage& g, const SamplingMask& mask, double alpha) {
    KSpaceGrid k = fourier::fft2(g);
    const double d = alpha / (1.0 + alpha);
    for (int yy = 0; yy < k.height; ++yy) {
        for (int xx = 0; xx < k.width; ++xx) {
            if (mask.kept_natural(yy, xx)) k.at(yy, xx) *= d;
        }
    }
    return fourier::ifft2(k);
}

}  // namespace

CascadeModel::CascadeModel(const CascadeConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), layers_(build_cascade_layers(cfg, seed)), cache_(std::make_unique<Cache>()) {}

CascadeModel::CascadeModel(const CascadeConfig& cfg, std::vector<ConvLayer> layers)
    : cfg_(cfg), layers_(std::move(layers)), cache_(std::make_unique<Cache>()) {
    if (layers_.size() != static_cast<std::size_t>(cfg.blocks) * cfg.convs_per_block)
        throw DimensionError("cascade: layer list does not match configuration");
}

ComplexImage CascadeModel::run(const KSpaceGrid& y, const SamplingMask& mask, Cache* cache) const {
    const fidelity::FidelityWeight alpha{cfg_.fidelity_alpha};
    const ComplexImage zero(mask.height, mask.width);
    ComplexImage x = sampling::zero_fill(y, mask);
    if (cache) {
        cache->y = y;
        cache->mask = &mask;
        cache->block_in.assign(cfg_.blocks, Tensor());
        cache->acts.assign(cfg_.blocks, {});
    }
    for (int b = 0; b < cfg_.blocks; ++b) {
        Tensor in = to_tensor(x);
        std::vector<Tensor> acts(cfg_.convs_per_block);
        const Tensor* cur = &in;
        for (int i = 0; i < cfg_.convs_per_block; ++i) {
            layers_[static_cast<std::size_t>(b) * cfg_.convs_per_block + i].forward(*cur, acts[i]);
            cur = &acts[i];
        }
        Tensor shortcut = in;
        errornet::add_into(shortcut, acts.back());
        if (cache) {
            cache->block_in[b] = std::move(in);
            cache->acts[b] = std::move(acts);
        }
        x = fidelity::fuse(y, mask, to_image(shortcut), zero, alpha);
    }
    return x;
}

ComplexImage CascadeModel::reconstruct(const KSpaceGrid& y, const SamplingMask& mask) const {
    return run(y, mask, nullptr);
}

std::vector<ConvLayer*> CascadeModel::trainable_layers() {
    std::vector<ConvLayer*> out;
    out.reserve(layers_.size());
    for (auto& l : layers_) out.push_back(&l);
    return out;
}

ComplexImage CascadeModel::predict(const errornet::TrainSample& s) {
    if (!s.mask) throw ParameterError("cascade: train sample carries no mask");
    return run(s.y, *s.mask, cache_.get());
}

void CascadeModel::backprop(const ComplexImage& output_grad) {
    if (!cache_->mask) throw UninitializedModelError("cascade: backprop before predict");
    const SamplingMask& mask = *cache_->mask;
    ComplexImage g = output_grad;
    for (int b = cfg_.blocks - 1; b >= 0; --b) {
        // Through the data-fidelity layer, then the shortcut split.
        Tensor gs = to_tensor(fidelity_adjoint(g, mask, cfg_.fidelity_alpha));
        Tensor gcur = gs;
        Tensor gin;
        for (int i = cfg_.convs_per_block - 1; i >= 0; --i) {
            auto& layer = layers_[static_cast<std::size_t>(b) * cfg_.convs_per_block + i];
            const Tensor& lin = i == 0 ? cache_->block_in[b] : cache_->acts[b][i - 1];
            const bool want_gin = i > 0 || b > 0;
            layer.backward(lin, cache_->acts[b][i], gcur, gin, want_gin);
            if (i > 0) gcur = gin;
        }
        if (b == 0) break;
        errornet::add_into(gin, gs);  // shortcut path
        g = to_image(gin);
    }
}

const ComplexImage& CascadeModel::train_target(const errornet::TrainSample& s) const {
    return s.ground_truth;
}

ComplexImage cascade_forward(const CascadeModel& model, const KSpaceGrid& y, const SamplingMask& mask) {
    return model.reconstruct(y, mask);
}

// ----------------------------------------------------------------------------

ComplexImage reconstruct(const GuideSolver& solver, const KSpaceGrid& y, const SamplingMask& mask) {
    switch (solver.kind) {
        case GuideKind::ZeroFill:
            return sampling::zero_fill(y, mask);
        case GuideKind::IstaWavelet: {
            check_ista(solver.ista);
            ComplexImage x = sampling::zero_fill(y, mask);
            for (int i = 0; i < solver.ista.iterations; ++i) x = ista_step(x, y, mask, solver.ista);
            return x;
        }
        case GuideKind::CascadeCnn:
            if (!solver.model) throw UninitializedModelError("guide: cascade weights not loaded");
            return solver.model->reconstruct(y, mask);
    }
    throw ParameterError("guide: unknown solver kind");
}

}  // namespace decn::guide
