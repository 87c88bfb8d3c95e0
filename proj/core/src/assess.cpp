#include "gradratio/assess.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gradratio/rng.hpp"

namespace gradratio {

Sinogram add_noise(const Sinogram& f, const NoiseSpec& spec) {
    Sinogram out = f;
    switch (spec.kind) {
    case NoiseKind::none:
        return out;
    case NoiseKind::gaussian: {
        if (spec.gaussian_level < 0.0)
            throw std::invalid_argument("add_noise: negative gaussian level");
        if (spec.gaussian_level == 0.0) return out;
        double fmax = 0.0;
        for (double v : f.data) fmax = std::max(fmax, v);
        const double sigma = spec.gaussian_level * fmax;
        Rng rng(spec.seed);
        for (double& v : out.data) v += sigma * rng.next_normal();
        return out;
    }
    case NoiseKind::poisson: {
        if (!(spec.i0 > 0.0))
            throw std::invalid_argument("add_noise: i0 must be positive");
        for (double v : f.data)
            if (v < 0.0)
                throw std::invalid_argument(
                    "add_noise: poisson requires a nonnegative sinogram");
        std::mt19937_64 gen(spec.seed);
        const double log_i0 = std::log(spec.i0);
        for (double& v : out.data) {
            const double mean = spec.i0 * std::exp(-v);
            std::poisson_distribution<long long> pois(mean);
            const long long k = std::max<long long>(1, pois(gen));
            v = log_i0 - std::log(static_cast<double>(k));
        }
        return out;
    }
    }
    return out;
}

RoiMask RoiMask::disk(int height, int width, double center_r, double center_c,
                      double radius) {
    if (height < 1 || width < 1 || !(radius > 0.0))
        throw std::invalid_argument("RoiMask: bad disk parameters");
    RoiMask m;
    m.height = height;
    m.width = width;
    m.inside.assign(static_cast<std::size_t>(height) * width, 0);
    std::size_t n = 0;
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            const double dr = r - center_r, dc = c - center_c;
            if (dr * dr + dc * dc <= radius * radius) {
                m.inside[static_cast<std::size_t>(r) * width + c] = 1;
                ++n;
            }
        }
    if (n == 0)
        throw std::invalid_argument("RoiMask: region selects no pixels");
    return m;
}

std::size_t RoiMask::count() const {
    std::size_t n = 0;
    for (auto v : inside) n += v;
    return n;
}

double rmse(const Image& a, const Image& b, const RoiMask* roi) {
    if (!a.same_shape(b))
        throw std::invalid_argument("rmse: shape mismatch");
    if (roi && (roi->height != a.height || roi->width != a.width))
        throw std::invalid_argument("rmse: ROI shape mismatch");
    double sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        if (roi && !roi->inside[i]) continue;
        const double d = a.data[i] - b.data[i];
        sq += d * d;
        ++n;
    }
    if (n == 0) throw std::invalid_argument("rmse: empty ROI");
    return std::sqrt(sq) / static_cast<double>(n);
}

double ssim(const Image& a, const Image& b, const RoiMask* roi) {
    constexpr int W = 8;
    constexpr double c1 = 0.05, c2 = 0.05;
    if (!a.same_shape(b))
        throw std::invalid_argument("ssim: shape mismatch");
    if (a.height < W || a.width < W)
        throw std::invalid_argument("ssim: image smaller than the 8x8 window");
    if (roi && (roi->height != a.height || roi->width != a.width))
        throw std::invalid_argument("ssim: ROI shape mismatch");

    double acc = 0.0;
    std::size_t windows = 0;
    for (int r = 0; r + W <= a.height; ++r) {
        for (int c = 0; c + W <= a.width; ++c) {
            if (roi) {
                bool ok = true;
                for (int i = 0; ok && i < W; ++i)
                    for (int j = 0; j < W; ++j)
                        if (!roi->at(r + i, c + j)) {
                            ok = false;
                            break;
                        }
                if (!ok) continue;
            }
            double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int i = 0; i < W; ++i) {
                const double* pa = &a.data[static_cast<std::size_t>(r + i) *
                                               a.width + c];
                const double* pb = &b.data[static_cast<std::size_t>(r + i) *
                                               b.width + c];
                for (int j = 0; j < W; ++j) {
                    const double x = pa[j], y = pb[j];
                    sx += x;
                    sy += y;
                    sxx += x * x;
                    syy += y * y;
                    sxy += x * y;
                }
            }
            constexpr double inv = 1.0 / (W * W);
            const double mx = sx * inv, my = sy * inv;
            const double vx = sxx * inv - mx * mx;
            const double vy = syy * inv - my * my;
            const double cxy = sxy * inv - mx * my;
            const double num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
            const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
            acc += num / den;
            ++windows;
        }
    }
    if (windows == 0)
        throw std::invalid_argument("ssim: no window fits inside the ROI");
    return acc / static_cast<double>(windows);
}

} // namespace gradratio
