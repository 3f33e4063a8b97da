#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "decn/conv.hpp"
#include "decn/fourier.hpp"
#include "decn/sampling.hpp"

namespace decn::errornet {

using fourier::ComplexImage;
using fourier::KSpaceGrid;
using sampling::SamplingMask;

// Network input / training-target wiring variants. The full model feeds the
// concatenated (zero-filled, guide) pair and regresses the guide's error;
// the ablations drop the concatenation, the error-correction target, or both.
enum class Ablation { DECN, NIC_NEC, IC_NEC, NIC_EC };

// Which single image feeds the non-concatenated variants.
enum class NicInput { Guide, ZeroFill };

inline bool concatenated_input(Ablation a) { return a == Ablation::DECN || a == Ablation::IC_NEC; }
inline bool error_correcting(Ablation a) { return a == Ablation::DECN || a == Ablation::NIC_EC; }
const char* to_string(Ablation a);
Ablation ablation_from_string(const std::string& s);

// Plain sequential conv stack with one long additive skip: the activations of
// layer skip_src are added to the input of layer skip_dst.
struct Network {
    std::vector<ConvLayer> layers;
    int skip_src = 0;
    int skip_dst = 0;

    int in_channels() const { return layers.empty() ? 0 : layers.front().in_ch; }
    std::size_t param_count() const;
};

// depth conv layers, ReLU activations except an identity on the last layer,
// skip from layer 0's activations into the input of the penultimate layer.
// Xavier-uniform weights, zero biases, deterministic in seed.
Network build_ecnet(int depth, int features, int in_channels, std::uint64_t seed);

std::vector<double> get_params(const Network& net);
void set_params(Network& net, std::span<const double> params);
std::vector<double> get_grads(const Network& net);

struct ForwardCache {
    Tensor input;
    std::vector<Tensor> act;
    Tensor skip_input;  // materialized input of layer skip_dst
};

const Tensor& net_forward(const Network& net, ForwardCache& cache);
void net_backward(Network& net, const ForwardCache& cache, const Tensor& gout);

// Complex image <-> real 2-channel (re, im) tensor.
Tensor to_tensor(const ComplexImage& a);
Tensor concat_tensors(const ComplexImage& a, const ComplexImage& b);  // 4 channels
ComplexImage to_image(const Tensor& t);

struct TrainSample {
    ComplexImage zf;               // Z(y)
    ComplexImage guide;            // guide reconstruction
    ComplexImage target_residual;  // ground_truth - guide, exactly
    ComplexImage ground_truth;
    KSpaceGrid y;                  // masked measurements, natural order
    std::shared_ptr<const SamplingMask> mask;
};

// Builds a sample with the exact residual identity guaranteed.
TrainSample make_train_sample(const ComplexImage& ground_truth, const ComplexImage& zf, const ComplexImage& guide,
                              const KSpaceGrid& y, std::shared_ptr<const SamplingMask> mask);

struct TrainConfig {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.99;  // stated second momentum; lower than the usual 0.999
    double weight_decay = 5e-4;
    int batch_size = 4;
    int iterations = 1000;
    std::uint64_t seed = 0;
    Ablation ablation = Ablation::DECN;
    NicInput nic_input = NicInput::Guide;
};

struct AdamState {
    std::vector<double> m, v;
    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected ADAM update, epsilon 1e-8. Weight decay is not applied
// here; it is already folded into the gradients by the loss.
void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m, std::span<double> v,
               const TrainConfig& cfg, long t);

// Interface the trainer drives; implemented by the error-correction model
// here and by the cascaded-CNN guide.
class TrainableModel {
  public:
    virtual ~TrainableModel() = default;
    virtual std::vector<ConvLayer*> trainable_layers() = 0;
    // Forward pass on a sample, caching activations for a following backprop.
    virtual ComplexImage predict(const TrainSample& s) = 0;
    // Accumulate parameter gradients given dL/d(output); must follow predict.
    virtual void backprop(const ComplexImage& output_grad) = 0;
    virtual const ComplexImage& train_target(const TrainSample& s) const = 0;
};

// Error-correction network with its ablation wiring. Borrows the network;
// the caller keeps it alive for the model's lifetime.
class EcModel : public TrainableModel {
  public:
    EcModel(Network& net, Ablation ablation, NicInput nic = NicInput::Guide)
        : net_(&net), ablation_(ablation), nic_(nic) {}

    Network& network() { return *net_; }
    const Network& network() const { return *net_; }
    Ablation ablation() const { return ablation_; }

    Tensor make_input(const ComplexImage& zf, const ComplexImage& guide) const;

    std::vector<ConvLayer*> trainable_layers() override;
    ComplexImage predict(const TrainSample& s) override;
    void backprop(const ComplexImage& output_grad) override;
    const ComplexImage& train_target(const TrainSample& s) const override;

  private:
    Network* net_;
    Ablation ablation_;
    NicInput nic_;
    ForwardCache cache_;
};

// Feed-forward residual estimate f_theta for one image pair.
ComplexImage forward(const Network& net, const ComplexImage& zf, const ComplexImage& guide, Ablation ablation,
                     NicInput nic = NicInput::Guide);

// Mean over the batch of 0.5*||target - f(inputs)||^2 plus
// weight_decay * 0.5*||weights||^2 (biases excluded from decay).
double loss(const Network& net, std::span<const TrainSample> batch, const TrainConfig& cfg);

// Exact gradient of loss() with respect to all parameters, flattened in layer
// order (weights then bias per layer).
std::vector<double> backward(Network& net, std::span<const TrainSample> batch, const TrainConfig& cfg);

struct TrainResult {
    std::vector<std::pair<long, double>> loss_history;  // (step, batch loss)
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

// Seeded-batch ADAM training loop. Aborts with DivergenceError if the loss
// goes non-finite or exceeds 1e6 times the first batch loss.
TrainResult train(TrainableModel& model, const std::vector<TrainSample>& data, const TrainConfig& cfg);

}  // namespace decn::errornet
