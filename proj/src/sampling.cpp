#include "decn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "decn/rng.hpp"

namespace decn::sampling {

namespace {

void validate_fractions(int height, int width, double target_ratio, double center_fraction, double count_scale) {
    if (height <= 0 || width <= 0) throw DimensionError("mask: dimensions must be positive");
    if (!(center_fraction > 0.0)) throw ParameterError("mask: center_fraction must be positive");
    if (center_fraction > target_ratio) throw ParameterError("mask: center_fraction exceeds target_ratio");
    if (target_ratio > 1.0) throw ParameterError("mask: target_ratio above 1");
    if (std::floor(target_ratio * count_scale) < 1.0) throw ParameterError("mask: target_ratio keeps no samples");
}

// Efraimidis-Spirakis weighted sampling without replacement: key_i =
// ln(u_i)/w_i, take the k largest keys. Zero weights get -inf keys and are
// only drawn once every positive-weight candidate is exhausted. Ties break
// on index, so the draw is a pure function of (weights, seed).
std::vector<std::size_t> weighted_sample(const std::vector<double>& weights, std::size_t k, CounterRng& rng) {
    struct Entry {
        double key;
        std::size_t idx;
    };
    std::vector<Entry> entries(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double u = rng.next_double();
        while (u <= 0.0) u = rng.next_double();
        const double key =
            weights[i] > 0.0 ? std::log(u) / weights[i] : -std::numeric_limits<double>::infinity();
        entries[i] = {key, i};
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.key != b.key) return a.key > b.key;
        return a.idx < b.idx;
    });
    std::vector<std::size_t> chosen(std::min(k, entries.size()));
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = entries[i].idx;
    return chosen;
}

void finalize(SamplingMask& mask) {
    mask.ratio = static_cast<double>(mask.count_kept()) /
                 (static_cast<double>(mask.height) * static_cast<double>(mask.width));
}

}  // namespace

std::size_t SamplingMask::count_kept() const {
    return static_cast<std::size_t>(std::count(kept.begin(), kept.end(), std::uint8_t(1)));
}

SamplingMask make_cartesian_mask(int height, int width, double target_ratio, double center_fraction,
                                 std::uint64_t seed) {
    validate_fractions(height, width, target_ratio, center_fraction, static_cast<double>(height));

    const std::size_t total_rows = static_cast<std::size_t>(std::floor(target_ratio * height));
    const std::size_t center_rows =
        std::min(total_rows, static_cast<std::size_t>(std::floor(center_fraction * height)));
    const int dc = fourier::dc_index(height);

    // Rows ordered by distance from the DC row, nearest first.
    std::vector<int> order(height);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [dc](int a, int b) {
        const int da = std::abs(a - dc), db = std::abs(b - dc);
        if (da != db) return da < db;
        return a < b;
    });

    std::vector<std::uint8_t> row_kept(height, 0);
    for (std::size_t i = 0; i < center_rows; ++i) row_kept[order[i]] = 1;

    if (total_rows > center_rows) {
        std::vector<int> rest(order.begin() + center_rows, order.end());
        const double r_max = static_cast<double>(std::max(dc, height - 1 - dc));
        std::vector<double> weights(rest.size());
        for (std::size_t i = 0; i < rest.size(); ++i) {
            const double r = std::abs(rest[i] - dc) / (r_max > 0.0 ? r_max : 1.0);
            weights[i] = std::pow(1.0 - std::min(r, 1.0), 3.0);
        }
        CounterRng rng = CounterRng(seed).stream(0x1d5a);
        for (std::size_t idx : weighted_sample(weights, total_rows - center_rows, rng)) row_kept[rest[idx]] = 1;
    }

    SamplingMask mask;
    mask.height = height;
    mask.width = width;
    mask.pattern = MaskPattern::Cartesian1D;
    mask.seed = seed;
    mask.kept.assign(static_cast<std::size_t>(height) * width, 0);
    for (int y = 0; y < height; ++y) {
        if (row_kept[y]) std::fill_n(mask.kept.begin() + static_cast<std::size_t>(y) * width, width, std::uint8_t(1));
    }
    finalize(mask);
    return mask;
}

SamplingMask make_random_mask(int height, int width, double target_ratio, double center_fraction,
                              std::uint64_t seed) {
    const double n = static_cast<double>(height) * static_cast<double>(width);
    validate_fractions(height, width, target_ratio, center_fraction, n);

    const std::size_t total = static_cast<std::size_t>(std::floor(target_ratio * n));
    const double disk_r2 = center_fraction * n / std::numbers::pi;
    const int dcy = fourier::dc_index(height);
    const int dcx = fourier::dc_index(width);

    // All points ordered by distance from DC; the central disk is kept
    // deterministically (capped at the total budget).
    std::vector<std::size_t> order(static_cast<std::size_t>(height) * width);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::vector<double> dist2(order.size());
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dy = y - dcy, dx = x - dcx;
            dist2[static_cast<std::size_t>(y) * width + x] = dy * dy + dx * dx;
        }
    }
    std::sort(order.begin(), order.end(), [&dist2](std::size_t a, std::size_t b) {
        if (dist2[a] != dist2[b]) return dist2[a] < dist2[b];
        return a < b;
    });

    SamplingMask mask;
    mask.height = height;
    mask.width = width;
    mask.pattern = MaskPattern::Random2D;
    mask.seed = seed;
    mask.kept.assign(order.size(), 0);

    std::size_t taken = 0;
    std::size_t first_outside = 0;
    while (first_outside < order.size() && taken < total && dist2[order[first_outside]] <= disk_r2) {
        mask.kept[order[first_outside]] = 1;
        ++first_outside;
        ++taken;
    }

    if (taken < total) {
        std::vector<std::size_t> rest(order.begin() + first_outside, order.end());
        const double r_max = std::sqrt(dist2[order.back()]);
        std::vector<double> weights(rest.size());
        for (std::size_t i = 0; i < rest.size(); ++i) {
            const double r = std::sqrt(dist2[rest[i]]) / (r_max > 0.0 ? r_max : 1.0);
            weights[i] = std::pow(1.0 - std::min(r, 1.0), 3.0);
        }
        CounterRng rng = CounterRng(seed).stream(0x2d5a);
        for (std::size_t idx : weighted_sample(weights, total - taken, rng)) mask.kept[rest[idx]] = 1;
    }
    finalize(mask);
    return mask;
}

SamplingMask make_full_mask(int height, int width) {
    if (height <= 0 || width <= 0) throw DimensionError("mask: dimensions must be positive");
    SamplingMask mask;
    mask.height = height;
    mask.width = width;
    mask.pattern = MaskPattern::Full;
    mask.kept.assign(static_cast<std::size_t>(height) * width, 1);
    mask.ratio = 1.0;
    return mask;
}

KSpaceGrid apply_mask(const KSpaceGrid& k, const SamplingMask& mask) {
    if (k.height != mask.height || k.width != mask.width)
        throw DimensionError("apply_mask: grid and mask dimensions differ");
    KSpaceGrid out = k;
    for (int y = 0; y < k.height; ++y) {
        for (int x = 0; x < k.width; ++x) {
            if (!mask.kept_natural(y, x)) out.at(y, x) = fourier::cplx(0.0, 0.0);
        }
    }
    return out;
}

KSpaceGrid measure(const ComplexImage& x, const SamplingMask& mask) {
    if (x.height != mask.height || x.width != mask.width)
        throw DimensionError("measure: image and mask dimensions differ");
    return apply_mask(fourier::fft2(x), mask);
}

ComplexImage zero_fill(const KSpaceGrid& y, const SamplingMask& mask) {
    if (y.height != mask.height || y.width != mask.width)
        throw DimensionError("zero_fill: grid and mask dimensions differ");
    return fourier::ifft2(apply_mask(y, mask));
}

}  // namespace decn::sampling
