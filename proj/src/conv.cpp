#include "decn/conv.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace decn::errornet {

namespace {

// Copy src into a zero-padded (h+2) x (w+2) buffer.
void pad1(const Tensor& src, Tensor& dst) {
    dst.resize(src.h + 2, src.w + 2, src.c);
    for (int y = 0; y < src.h; ++y) {
        std::copy(src.at(y, 0), src.at(y, 0) + static_cast<std::size_t>(src.w) * src.c, dst.at(y + 1, 1));
    }
}

constexpr int kMaxCh = 256;  // stack accumulator bound for the generic paths

// 3x3 valid convolution over a padded input, accumulating P output pixels at
// a time so each weight row load feeds P fused multiply-adds. CI_T/CO_T are
// compile-time channel counts (0 = runtime); the hot square shapes get fully
// static instantiations, which is what lets the accumulators live in
// registers.
template <int CI_T, int CO_T, int P>
inline void fwd_block(const double* __restrict ip, const double* __restrict wp, const double* bias,
                      double* __restrict op, int h, int w, int ci_rt, int co_rt, int x0, int x1) {
    const int ci = CI_T ? CI_T : ci_rt;
    const int co = CO_T ? CO_T : co_rt;
    const int wpad = w + 2;
    for (int y = 0; y < h; ++y) {
        for (int x = x0; x + P <= x1; x += P) {
            double acc[P][CO_T ? CO_T : kMaxCh];
            for (int p = 0; p < P; ++p) {
                if (bias) {
                    std::memcpy(acc[p], bias, sizeof(double) * co);
                } else {
                    std::memset(acc[p], 0, sizeof(double) * co);
                }
            }
            for (int k = 0; k < 9; ++k) {
                const int ky = k / 3, kx = k % 3;
                const double* pin = ip + (static_cast<std::size_t>(y + ky) * wpad + x + kx) * ci;
                const double* wrow = wp + static_cast<std::size_t>(k) * ci * co;
                for (int ic = 0; ic < ci; ++ic) {
                    const double* __restrict wr = wrow + static_cast<std::size_t>(ic) * co;
                    for (int p = 0; p < P; ++p) {
                        const double v = pin[p * ci + ic];
                        double* __restrict a = acc[p];
                        for (int oc = 0; oc < co; ++oc) a[oc] += v * wr[oc];
                    }
                }
            }
            for (int p = 0; p < P; ++p) {
                std::memcpy(op + (static_cast<std::size_t>(y) * w + x + p) * co, acc[p], sizeof(double) * co);
            }
        }
    }
}

template <int CI_T, int CO_T>
void fwd_run(const double* ip, const double* wp, const double* bias, double* op, int h, int w, int ci, int co) {
    const int main_end = w - w % 4;
    fwd_block<CI_T, CO_T, 4>(ip, wp, bias, op, h, w, ci, co, 0, main_end);
    if (main_end < w) fwd_block<CI_T, CO_T, 1>(ip, wp, bias, op, h, w, ci, co, main_end, w);
}

using FwdFn = void (*)(const double*, const double*, const double*, double*, int, int, int, int);

FwdFn select_fwd(int ci, int co) {
    if (ci == co) {
        switch (ci) {
            case 16: return fwd_run<16, 16>;
            case 32: return fwd_run<32, 32>;
            case 64: return fwd_run<64, 64>;
        }
    }
    switch (co) {
        case 2: return fwd_run<0, 2>;
        case 4: return fwd_run<0, 4>;
        case 8: return fwd_run<0, 8>;
        case 16: return fwd_run<0, 16>;
        case 32: return fwd_run<0, 32>;
        case 64: return fwd_run<0, 64>;
    }
    return fwd_run<0, 0>;
}

// Weight gradient: for each (tap, input channel) a CO-wide accumulator row
// per image row stays in registers, giving independent FMA chains, while the
// gradient rows are re-read from L1 and weight-gradient traffic stays tiny.
template <int CI_T, int CO_T, int R>
inline void dw_block(const double* __restrict ip, const double* __restrict gp, double* __restrict gwp, int h, int w,
                     int ci_rt, int co_rt, int y0, int y1) {
    const int ci = CI_T ? CI_T : ci_rt;
    const int co = CO_T ? CO_T : co_rt;
    const int wpad = w + 2;
    for (int y = y0; y + R <= y1; y += R) {
        for (int k = 0; k < 9; ++k) {
            const int ky = k / 3, kx = k % 3;
            for (int ic = 0; ic < ci; ++ic) {
                double* __restrict wr = gwp + (static_cast<std::size_t>(k) * ci + ic) * co;
                double acc[R][CO_T ? CO_T : kMaxCh];
                std::memcpy(acc[0], wr, sizeof(double) * co);
                for (int r = 1; r < R; ++r) std::memset(acc[r], 0, sizeof(double) * co);
                const double* prow[R];
                const double* grow[R];
                for (int r = 0; r < R; ++r) {
                    prow[r] = ip + (static_cast<std::size_t>(y + r + ky) * wpad + kx) * ci + ic;
                    grow[r] = gp + static_cast<std::size_t>(y + r) * w * co;
                }
                for (int x = 0; x < w; ++x) {
                    for (int r = 0; r < R; ++r) {
                        const double v = prow[r][static_cast<std::size_t>(x) * ci];
                        const double* __restrict g = grow[r] + static_cast<std::size_t>(x) * co;
                        double* __restrict a = acc[r];
                        for (int oc = 0; oc < co; ++oc) a[oc] += v * g[oc];
                    }
                }
                for (int r = 1; r < R; ++r)
                    for (int oc = 0; oc < co; ++oc) acc[0][oc] += acc[r][oc];
                std::memcpy(wr, acc[0], sizeof(double) * co);
            }
        }
    }
}

template <int CI_T, int CO_T>
void dw_run(const double* ip, const double* gp, double* gwp, int h, int w, int ci, int co) {
    const int main_end = h - h % 2;
    dw_block<CI_T, CO_T, 2>(ip, gp, gwp, h, w, ci, co, 0, main_end);
    if (main_end < h) dw_block<CI_T, CO_T, 1>(ip, gp, gwp, h, w, ci, co, main_end, h);
}

using DwFn = void (*)(const double*, const double*, double*, int, int, int, int);

DwFn select_dw(int ci, int co) {
    if (ci == co) {
        switch (ci) {
            case 16: return dw_run<16, 16>;
            case 32: return dw_run<32, 32>;
            case 64: return dw_run<64, 64>;
        }
    }
    switch (co) {
        case 2: return dw_run<0, 2>;
        case 4: return dw_run<0, 4>;
        case 8: return dw_run<0, 8>;
        case 16: return dw_run<0, 16>;
        case 32: return dw_run<0, 32>;
        case 64: return dw_run<0, 64>;
    }
    return dw_run<0, 0>;
}

}  // namespace

ConvLayer::ConvLayer(int in, int out, Activation a) : in_ch(in), out_ch(out), act(a) {
    if (in <= 0 || out <= 0) throw DimensionError("ConvLayer: channel counts must be positive");
    if (in > kMaxCh || out > kMaxCh) throw DimensionError("ConvLayer: channel count above supported maximum");
    w.assign(weight_count(), 0.0);
    b.assign(out_ch, 0.0);
    gw.assign(w.size(), 0.0);
    gb.assign(b.size(), 0.0);
}

void ConvLayer::init_xavier(CounterRng& rng) {
    const double fan_in = 9.0 * in_ch;
    const double fan_out = 9.0 * out_ch;
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (auto& x : w) x = rng.next_double(-bound, bound);
    std::fill(b.begin(), b.end(), 0.0);
}

void ConvLayer::zero_grad() {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
}

void ConvLayer::forward(const Tensor& in, Tensor& out) const {
    if (in.c != in_ch) throw DimensionError("ConvLayer::forward: input channel mismatch");
    Tensor pad;
    pad1(in, pad);
    out.resize(in.h, in.w, out_ch);
    select_fwd(in_ch, out_ch)(pad.v.data(), w.data(), b.data(), out.v.data(), in.h, in.w, in_ch, out_ch);
    if (act == Activation::ReLU) {
        for (auto& v : out.v) v = v > 0.0 ? v : 0.0;
    }
}

void ConvLayer::backward(const Tensor& in, const Tensor& out, const Tensor& gout, Tensor& gin,
                         bool want_input_grad) {
    const int h = in.h, wd = in.w, ci = in_ch, co = out_ch;

    // dL/d(pre-activation). For ReLU the post-activation sign identifies the
    // active set (out > 0 iff pre > 0).
    Tensor dpre(h, wd, co);
    if (act == Activation::ReLU) {
        for (std::size_t i = 0; i < dpre.size(); ++i) dpre.v[i] = out.v[i] > 0.0 ? gout.v[i] : 0.0;
    } else {
        dpre.v = gout.v;
    }

    if (want_input_grad) {
        // Input gradient: a 3x3 correlation of dpre with spatially flipped,
        // channel-transposed weights. Reuses the forward kernel with the
        // roles of the channel axes swapped.
        std::vector<double> wt(w.size());
        for (int k = 0; k < 9; ++k) {
            const double* src = w.data() + static_cast<std::size_t>(8 - k) * ci * co;
            double* dst = wt.data() + static_cast<std::size_t>(k) * ci * co;
            for (int ic = 0; ic < ci; ++ic)
                for (int oc = 0; oc < co; ++oc)
                    dst[static_cast<std::size_t>(oc) * ci + ic] = src[static_cast<std::size_t>(ic) * co + oc];
        }
        Tensor dpre_pad;
        pad1(dpre, dpre_pad);
        gin.resize(h, wd, ci);
        select_fwd(co, ci)(dpre_pad.v.data(), wt.data(), nullptr, gin.v.data(), h, wd, co, ci);
    }

    // Weight and bias gradients.
    Tensor in_pad;
    pad1(in, in_pad);
    select_dw(ci, co)(in_pad.v.data(), dpre.v.data(), gw.data(), h, wd, ci, co);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < wd; ++x) {
            const double* g = dpre.at(y, x);
            for (int oc = 0; oc < co; ++oc) gb[oc] += g[oc];
        }
    }
}

void add_into(Tensor& y, const Tensor& x) {
    if (y.size() != x.size()) throw DimensionError("add_into: shape mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y.v[i] += x.v[i];
}

}  // namespace decn::errornet
