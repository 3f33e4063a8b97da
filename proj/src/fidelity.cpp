#include "decn/fidelity.hpp"

#include <cmath>
#include <string>

namespace decn::fidelity {

namespace {

void check_alpha(FidelityWeight alpha) {
    if (!(alpha.alpha > 0.0)) throw ParameterError("fidelity: alpha must be positive");
}

}  // namespace

ComplexImage fuse(const KSpaceGrid& y, const SamplingMask& mask, const ComplexImage& guide,
                  const ComplexImage& residual_estimate, FidelityWeight alpha) {
    check_alpha(alpha);
    fourier::check_same_shape(y.height, y.width, mask.height, mask.width, "fuse");
    fourier::check_same_shape(guide.height, guide.width, mask.height, mask.width, "fuse");
    fourier::check_same_shape(residual_estimate.height, residual_estimate.width, mask.height, mask.width, "fuse");

    const ComplexImage t = fourier::add(guide, residual_estimate);
    KSpaceGrid tk = fourier::fft2(t);
    const double a = alpha.alpha;
    // Branch on the mask bit so unsampled entries are passed through bit-for-
    // bit rather than as (a*T)/a.
    for (int yy = 0; yy < tk.height; ++yy) {
        for (int xx = 0; xx < tk.width; ++xx) {
            if (mask.kept_natural(yy, xx)) {
                tk.at(yy, xx) = (y.at(yy, xx) + a * tk.at(yy, xx)) / (1.0 + a);
            }
        }
    }
    return fourier::ifft2(tk);
}

ComplexImage fuse_oracle_cg(const KSpaceGrid& y, const SamplingMask& mask, const ComplexImage& t,
                            FidelityWeight alpha, double tol, int max_iters) {
    check_alpha(alpha);
    fourier::check_same_shape(y.height, y.width, mask.height, mask.width, "fuse_oracle_cg");
    fourier::check_same_shape(t.height, t.width, mask.height, mask.width, "fuse_oracle_cg");
    const double a = alpha.alpha;

    auto apply = [&](const ComplexImage& v) {
        ComplexImage av = fourier::ifft2(sampling::apply_mask(fourier::fft2(v), mask));
        for (std::size_t i = 0; i < av.data.size(); ++i) av.data[i] += a * v.data[i];
        return av;
    };
    auto dot_re = [](const ComplexImage& u, const ComplexImage& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.data.size(); ++i)
            s += u.data[i].real() * v.data[i].real() + u.data[i].imag() * v.data[i].imag();
        return s;
    };

    // b = F_u^H y + alpha t
    ComplexImage b = sampling::zero_fill(y, mask);
    for (std::size_t i = 0; i < b.data.size(); ++i) b.data[i] += a * t.data[i];
    const double bnorm = std::sqrt(fourier::norm2(b));
    if (bnorm == 0.0) return ComplexImage(t.height, t.width);

    ComplexImage x(t.height, t.width);
    ComplexImage r = b;
    ComplexImage p = r;
    double rs = dot_re(r, r);
    for (int it = 0; it < max_iters; ++it) {
        if (std::sqrt(rs) <= tol * bnorm) return x;
        ComplexImage ap = apply(p);
        const double step = rs / dot_re(p, ap);
        for (std::size_t i = 0; i < x.data.size(); ++i) {
            x.data[i] += step * p.data[i];
            r.data[i] -= step * ap.data[i];
        }
        const double rs_next = dot_re(r, r);
        const double beta = rs_next / rs;
        rs = rs_next;
        for (std::size_t i = 0; i < p.data.size(); ++i) p.data[i] = r.data[i] + beta * p.data[i];
    }
    if (std::sqrt(rs) <= tol * bnorm) return x;
    throw ConvergenceError("fuse_oracle_cg: residual " + std::to_string(std::sqrt(rs) / bnorm) +
                           " above tolerance after " + std::to_string(max_iters) + " iterations");
}

double fusion_objective(const ComplexImage& x, const KSpaceGrid& y, const SamplingMask& mask, const ComplexImage& t,
                        FidelityWeight alpha) {
    fourier::check_same_shape(x.height, x.width, mask.height, mask.width, "fusion_objective");
    fourier::check_same_shape(t.height, t.width, mask.height, mask.width, "fusion_objective");
    KSpaceGrid fx = fourier::fft2(x);
    double data = 0.0;
    for (int yy = 0; yy < fx.height; ++yy) {
        for (int xx = 0; xx < fx.width; ++xx) {
            if (mask.kept_natural(yy, xx)) data += std::norm(fx.at(yy, xx) - y.at(yy, xx));
        }
    }
    double reg = 0.0;
    for (std::size_t i = 0; i < x.data.size(); ++i) reg += std::norm(x.data[i] - t.data[i]);
    return data + alpha.alpha * reg;
}

}  // namespace decn::fidelity
