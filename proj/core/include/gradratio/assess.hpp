#pragma once

#include <cstdint>
#include <vector>

#include "gradratio/projector.hpp"
#include "gradratio/types.hpp"

namespace gradratio {

enum class NoiseKind { none, gaussian, poisson };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::none;
    double gaussian_level = 0.005; // fraction of max(f)
    double i0 = 1e5;               // incident photon count
    std::uint64_t seed = 0;
};

/// Gaussian: f + N(0, sigma^2) i.i.d. with sigma = level * max(f).
/// Poisson: counts k ~ Poisson(i0 * exp(-f)) per bin, returned as
/// -log(max(k,1)/i0); requires f >= 0. none: identity. Seeded and
/// deterministic.
Sinogram add_noise(const Sinogram& f, const NoiseSpec& spec);

/// Boolean pixel mask; construction fails if no pixel is selected.
struct RoiMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> inside;

    /// Disk of the given radius around (center_r, center_c), in pixels.
    static RoiMask disk(int height, int width, double center_r,
                        double center_c, double radius);

    bool at(int r, int c) const {
        return inside[static_cast<std::size_t>(r) * width + c] != 0;
    }
    std::size_t count() const;
};

/// ||a - b||_2 over the (ROI) pixels divided by the number of (ROI)
/// pixels.
double rmse(const Image& a, const Image& b, const RoiMask* roi = nullptr);

/// Mean over all fully interior 8x8 sliding windows (stride 1) of the
/// local similarity index with c1 = c2 = 0.05; windows must lie fully
/// inside the ROI when one is given. Window statistics use the
/// population (divide-by-64) convention.
double ssim(const Image& a, const Image& b, const RoiMask* roi = nullptr);

} // namespace gradratio
