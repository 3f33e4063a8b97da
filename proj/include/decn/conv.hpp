#pragma once

#include <cstdint>
#include <vector>

#include "decn/errors.hpp"
#include "decn/rng.hpp"

namespace decn::errornet {

// Dense H x W x C tensor, channel-innermost (HWC). The channel dimension is
// the vector lane in every convolution loop, so keep it contiguous.
struct Tensor {
    int h = 0, w = 0, c = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int h_, int w_, int c_) { resize(h_, w_, c_); }

    void resize(int h_, int w_, int c_) {
        h = h_;
        w = w_;
        c = c_;
        v.assign(static_cast<std::size_t>(h_) * w_ * c_, 0.0);
    }
    void zero() { std::fill(v.begin(), v.end(), 0.0); }
    double* at(int y, int x) { return v.data() + (static_cast<std::size_t>(y) * w + x) * c; }
    const double* at(int y, int x) const { return v.data() + (static_cast<std::size_t>(y) * w + x) * c; }
    std::size_t size() const { return v.size(); }
};

enum class Activation { ReLU, Identity };

// 3x3 stride-1 zero-padded ("same") convolution layer. Weights are stored
// [ky][kx][cin][cout] with cout contiguous so the channel loops run along
// contiguous vector lanes; the input gradient reuses the forward kernel with
// spatially flipped, channel-transposed weights. Everything is sequential
// and allocation order is fixed, so results are bit-reproducible.
struct ConvLayer {
    int in_ch = 0, out_ch = 0;
    Activation act = Activation::ReLU;
    std::vector<double> w, b;    // parameters
    std::vector<double> gw, gb;  // gradient accumulators

    ConvLayer() = default;
    ConvLayer(int in, int out, Activation a);

    std::size_t weight_count() const { return static_cast<std::size_t>(9) * in_ch * out_ch; }
    std::size_t param_count() const { return weight_count() + out_ch; }

    void init_xavier(CounterRng& rng);
    void zero_grad();

    // out = act(conv(in) + b). Resizes out.
    void forward(const Tensor& in, Tensor& out) const;

    // Given the cached layer input and post-activation output plus dL/d(out),
    // accumulates dL/dW and dL/db and writes dL/d(in) into gin. The input
    // gradient can be skipped for the first layer of a network.
    void backward(const Tensor& in, const Tensor& out, const Tensor& gout, Tensor& gin,
                  bool want_input_grad = true);
};

// Elementwise y += x (shapes must match).
void add_into(Tensor& y, const Tensor& x);

}  // namespace decn::errornet
