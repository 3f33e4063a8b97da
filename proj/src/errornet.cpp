#include "decn/errornet.hpp"

#include <cmath>

namespace decn::errornet {

const char* to_string(Ablation a) {
    switch (a) {
        case Ablation::DECN: return "decn";
        case Ablation::NIC_NEC: return "nic_nec";
        case Ablation::IC_NEC: return "ic_nec";
        case Ablation::NIC_EC: return "nic_ec";
    }
    return "decn";
}

Ablation ablation_from_string(const std::string& s) {
    if (s == "decn") return Ablation::DECN;
    if (s == "nic_nec") return Ablation::NIC_NEC;
    if (s == "ic_nec") return Ablation::IC_NEC;
    if (s == "nic_ec") return Ablation::NIC_EC;
    throw ParameterError("unknown ablation mode: " + s);
}

std::size_t Network::param_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.param_count();
    return n;
}

Network build_ecnet(int depth, int features, int in_channels, std::uint64_t seed) {
    if (depth < 3) throw ParameterError("build_ecnet: depth must be at least 3 (skip endpoints undefined)");
    if (features <= 0 || in_channels <= 0) throw ParameterError("build_ecnet: channel counts must be positive");
    Network net;
    net.layers.reserve(depth);
    net.layers.emplace_back(in_channels, features, Activation::ReLU);
    for (int i = 1; i < depth - 1; ++i) net.layers.emplace_back(features, features, Activation::ReLU);
    net.layers.emplace_back(features, 2, Activation::Identity);
    net.skip_src = 0;
    net.skip_dst = depth - 2;
    CounterRng rng = CounterRng(seed).stream(0xec);
    for (auto& l : net.layers) l.init_xavier(rng);
    return net;
}

std::vector<double> get_params(const Network& net) {
    std::vector<double> out;
    out.reserve(net.param_count());
    for (const auto& l : net.layers) {
        out.insert(out.end(), l.w.begin(), l.w.end());
        out.insert(out.end(), l.b.begin(), l.b.end());
    }
    return out;
}

void set_params(Network& net, std::span<const double> params) {
    if (params.size() != net.param_count()) throw DimensionError("set_params: size mismatch");
    std::size_t off = 0;
    for (auto& l : net.layers) {
        std::copy_n(params.begin() + off, l.w.size(), l.w.begin());
        off += l.w.size();
        std::copy_n(params.begin() + off, l.b.size(), l.b.begin());
        off += l.b.size();
    }
}

std::vector<double> get_grads(const Network& net) {
    std::vector<double> out;
    out.reserve(net.param_count());
    for (const auto& l : net.layers) {
        out.insert(out.end(), l.gw.begin(), l.gw.end());
        out.insert(out.end(), l.gb.begin(), l.gb.end());
    }
    return out;
}

const Tensor& net_forward(const Network& net, ForwardCache& cache) {
    const int n = static_cast<int>(net.layers.size());
    cache.act.resize(n);
    const Tensor* cur = &cache.input;
    for (int i = 0; i < n; ++i) {
        if (i == net.skip_dst && i > 0) {
            cache.skip_input = *cur;
            add_into(cache.skip_input, cache.act[net.skip_src]);
            net.layers[i].forward(cache.skip_input, cache.act[i]);
        } else {
            net.layers[i].forward(*cur, cache.act[i]);
        }
        cur = &cache.act[i];
    }
    return cache.act.back();
}

void net_backward(Network& net, const ForwardCache& cache, const Tensor& gout) {
    const int n = static_cast<int>(net.layers.size());
    std::vector<Tensor> gact(n);
    gact[n - 1] = gout;
    for (int i = n - 2; i >= 0; --i) gact[i].resize(cache.act[i].h, cache.act[i].w, cache.act[i].c);

    Tensor gin;
    for (int i = n - 1; i >= 0; --i) {
        const Tensor& input =
            i == 0 ? cache.input : (i == net.skip_dst ? cache.skip_input : cache.act[i - 1]);
        net.layers[i].backward(input, cache.act[i], gact[i], gin, i > 0);
        if (i > 0) {
            add_into(gact[i - 1], gin);
            if (i == net.skip_dst) add_into(gact[net.skip_src], gin);
        }
    }
}

Tensor to_tensor(const ComplexImage& a) {
    Tensor t(a.height, a.width, 2);
    for (int y = 0; y < a.height; ++y) {
        double* row = t.at(y, 0);
        for (int x = 0; x < a.width; ++x) {
            row[2 * x] = a.at(y, x).real();
            row[2 * x + 1] = a.at(y, x).imag();
        }
    }
    return t;
}

Tensor concat_tensors(const ComplexImage& a, const ComplexImage& b) {
    fourier::check_same_shape(a.height, a.width, b.height, b.width, "concat_tensors");
    Tensor t(a.height, a.width, 4);
    for (int y = 0; y < a.height; ++y) {
        double* row = t.at(y, 0);
        for (int x = 0; x < a.width; ++x) {
            row[4 * x] = a.at(y, x).real();
            row[4 * x + 1] = a.at(y, x).imag();
            row[4 * x + 2] = b.at(y, x).real();
            row[4 * x + 3] = b.at(y, x).imag();
        }
    }
    return t;
}

ComplexImage to_image(const Tensor& t) {
    if (t.c != 2) throw DimensionError("to_image: tensor must have 2 channels");
    ComplexImage img(t.h, t.w);
    for (int y = 0; y < t.h; ++y) {
        const double* row = t.at(y, 0);
        for (int x = 0; x < t.w; ++x) img.at(y, x) = fourier::cplx(row[2 * x], row[2 * x + 1]);
    }
    return img;
}

TrainSample make_train_sample(const ComplexImage& ground_truth, const ComplexImage& zf, const ComplexImage& guide,
                              const KSpaceGrid& y, std::shared_ptr<const SamplingMask> mask) {
    TrainSample s;
    s.zf = zf;
    s.guide = guide;
    s.ground_truth = ground_truth;
    s.target_residual = fourier::sub(ground_truth, guide);
    s.y = y;
    s.mask = std::move(mask);
    return s;
}

void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m, std::span<double> v,
               const TrainConfig& cfg, long t) {
    if (t < 1) throw ParameterError("adam_step: step index must be >= 1");
    if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0 && cfg.beta2 > 0.0 && cfg.beta2 < 1.0))
        throw ParameterError("adam_step: betas must lie in (0,1)");
    if (params.size() != grads.size() || params.size() != m.size() || params.size() != v.size())
        throw DimensionError("adam_step: size mismatch");
    constexpr double eps = 1e-8;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grads[i];
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + eps);
    }
}

Tensor EcModel::make_input(const ComplexImage& zf, const ComplexImage& guide) const {
    Tensor in = concatenated_input(ablation_) ? concat_tensors(zf, guide)
                                              : to_tensor(nic_ == NicInput::Guide ? guide : zf);
    if (in.c != net_->in_channels())
        throw DimensionError("EcModel: network input channels do not match ablation mode");
    return in;
}

std::vector<ConvLayer*> EcModel::trainable_layers() {
    std::vector<ConvLayer*> out;
    out.reserve(net_->layers.size());
    for (auto& l : net_->layers) out.push_back(&l);
    return out;
}

ComplexImage EcModel::predict(const TrainSample& s) {
    cache_.input = make_input(s.zf, s.guide);
    return to_image(net_forward(*net_, cache_));
}

void EcModel::backprop(const ComplexImage& output_grad) {
    net_backward(*net_, cache_, to_tensor(output_grad));
}

const ComplexImage& EcModel::train_target(const TrainSample& s) const {
    return error_correcting(ablation_) ? s.target_residual : s.ground_truth;
}

ComplexImage forward(const Network& net, const ComplexImage& zf, const ComplexImage& guide, Ablation ablation,
                     NicInput nic) {
    Tensor in = concatenated_input(ablation) ? concat_tensors(zf, guide)
                                             : to_tensor(nic == NicInput::Guide ? guide : zf);
    if (in.c != net.in_channels())
        throw DimensionError("forward: network input channels do not match ablation mode");
    ForwardCache cache;
    cache.input = std::move(in);
    return to_image(net_forward(net, cache));
}

namespace {

double weight_decay_term(const std::vector<ConvLayer*>& layers, double wd) {
    if (wd == 0.0) return 0.0;
    double sq = 0.0;
    for (const auto* l : layers) {
        for (double x : l->w) sq += x * x;
    }
    return 0.5 * wd * sq;
}

// Shared batch pass: accumulates data-term gradients scaled by 1/batch into
// the layer buffers (when with_grads) and returns the full loss.
double batch_pass(TrainableModel& model, std::span<const TrainSample* const> batch, const TrainConfig& cfg,
                  bool with_grads) {
    if (batch.empty()) throw ParameterError("loss: empty batch");
    auto layers = model.trainable_layers();
    if (with_grads) {
        for (auto* l : layers) l->zero_grad();
    }
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    double data = 0.0;
    for (const TrainSample* s : batch) {
        ComplexImage out = model.predict(*s);
        ComplexImage r = fourier::sub(out, model.train_target(*s));
        data += 0.5 * fourier::norm2(r);
        if (with_grads) model.backprop(fourier::scale(r, inv_b));
    }
    data *= inv_b;
    if (with_grads && cfg.weight_decay != 0.0) {
        for (auto* l : layers) {
            for (std::size_t i = 0; i < l->w.size(); ++i) l->gw[i] += cfg.weight_decay * l->w[i];
        }
    }
    return data + weight_decay_term(layers, cfg.weight_decay);
}

std::vector<const TrainSample*> as_pointers(std::span<const TrainSample> batch) {
    std::vector<const TrainSample*> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) out[i] = &batch[i];
    return out;
}

}  // namespace

double loss(const Network& net, std::span<const TrainSample> batch, const TrainConfig& cfg) {
    Network copy = net;
    EcModel model(copy, cfg.ablation, cfg.nic_input);
    auto ptrs = as_pointers(batch);
    return batch_pass(model, ptrs, cfg, false);
}

std::vector<double> backward(Network& net, std::span<const TrainSample> batch, const TrainConfig& cfg) {
    EcModel model(net, cfg.ablation, cfg.nic_input);
    auto ptrs = as_pointers(batch);
    batch_pass(model, ptrs, cfg, true);
    return get_grads(net);
}

TrainResult train(TrainableModel& model, const std::vector<TrainSample>& data, const TrainConfig& cfg) {
    if (data.empty()) throw ParameterError("train: empty dataset");
    if (cfg.batch_size <= 0 || cfg.iterations < 0) throw ParameterError("train: bad batch size or iterations");

    auto layers = model.trainable_layers();
    std::size_t total = 0;
    for (auto* l : layers) total += l->param_count();
    AdamState state(total);

    CounterRng order = CounterRng(cfg.seed).stream(0xba7c);
    TrainResult result;
    result.loss_history.reserve(cfg.iterations);

    std::vector<const TrainSample*> batch(cfg.batch_size);
    for (long t = 1; t <= cfg.iterations; ++t) {
        for (int i = 0; i < cfg.batch_size; ++i) batch[i] = &data[order.next_below(data.size())];
        const double batch_loss = batch_pass(model, batch, cfg, true);

        if (t == 1) result.initial_loss = batch_loss;
        result.loss_history.emplace_back(t, batch_loss);
        result.final_loss = batch_loss;
        if (!std::isfinite(batch_loss) || (result.initial_loss > 0.0 && batch_loss > 1e6 * result.initial_loss)) {
            throw DivergenceError("train: loss diverged at step " + std::to_string(t) + " (loss " +
                                  std::to_string(batch_loss) + ")");
        }

        std::size_t off = 0;
        for (auto* l : layers) {
            adam_step(std::span(l->w), std::span(l->gw), std::span(state.m).subspan(off, l->w.size()),
                      std::span(state.v).subspan(off, l->w.size()), cfg, t);
            off += l->w.size();
            adam_step(std::span(l->b), std::span(l->gb), std::span(state.m).subspan(off, l->b.size()),
                      std::span(state.v).subspan(off, l->b.size()), cfg, t);
            off += l->b.size();
        }
    }
    return result;
}

}  // namespace decn::errornet
