#include "gradratio/phantom.hpp"

#include <cmath>
#include <stdexcept>

namespace gradratio {

namespace {

constexpr double kDegToRad = 0.017453292519943295;

// Geometry shared by both variants: {a, b, x0, y0, phi_deg}.
struct EllipseGeom {
    double a, b, x0, y0, phi_deg;
};

constexpr EllipseGeom kGeom[10] = {
    {0.6900, 0.9200, 0.00, 0.0000, 0.0},
    {0.6624, 0.8740, 0.00, -0.0184, 0.0},
    {0.1100, 0.3100, 0.22, 0.0000, -18.0},
    {0.1600, 0.4100, -0.22, 0.0000, 18.0},
    {0.2100, 0.2500, 0.00, 0.3500, 0.0},
    {0.0460, 0.0460, 0.00, 0.1000, 0.0},
    {0.0460, 0.0460, 0.00, -0.1000, 0.0},
    {0.0460, 0.0230, -0.08, -0.6050, 0.0},
    {0.0230, 0.0230, 0.00, -0.6060, 0.0},
    {0.0230, 0.0460, 0.06, -0.6050, 0.0},
};

// Modified (high contrast) and original (low contrast) intensities.
constexpr double kHighContrast[10] = {1.0, -0.8, -0.2, -0.2, 0.1,
                                      0.1, 0.1,  0.1,  0.1,  0.1};
constexpr double kLowContrast[10] = {1.0, -0.98, -0.02, -0.02, 0.01,
                                     0.01, 0.01, 0.01,  0.01,  0.01};

EllipseSpec make_spec(int i, PhantomVariant variant) {
    const double* intens =
        variant == PhantomVariant::high_contrast ? kHighContrast : kLowContrast;
    return EllipseSpec{intens[i],    kGeom[i].x0, kGeom[i].y0,
                       kGeom[i].a,   kGeom[i].b,  kGeom[i].phi_deg * kDegToRad};
}

} // namespace

const EllipseSpec* shepp_logan_table(PhantomVariant variant, int* count) {
    static EllipseSpec high[10];
    static EllipseSpec low[10];
    static const bool init = [] {
        for (int i = 0; i < 10; ++i) {
            high[i] = make_spec(i, PhantomVariant::high_contrast);
            low[i] = make_spec(i, PhantomVariant::low_contrast);
        }
        return true;
    }();
    (void)init;
    if (count) *count = 10;
    return variant == PhantomVariant::high_contrast ? high : low;
}

Image shepp_logan(int size, PhantomVariant variant) {
    if (size < 16)
        throw std::invalid_argument("shepp_logan: size must be >= 16");

    int count = 0;
    const EllipseSpec* table = shepp_logan_table(variant, &count);

    Image img(size, size);
    const double step = 2.0 / size;
    for (int r = 0; r < size; ++r) {
        // Row 0 is the top of the head (y = +1 edge).
        const double y = 1.0 - (r + 0.5) * step;
        for (int c = 0; c < size; ++c) {
            const double x = -1.0 + (c + 0.5) * step;
            // Positive and negative intensities accumulate separately so
            // that exact table cancellations (1 - 0.8 - 0.2) yield 0.
            double pos = 0.0, neg = 0.0;
            for (int i = 0; i < count; ++i) {
                const EllipseSpec& e = table[i];
                const double dx = x - e.center_x;
                const double dy = y - e.center_y;
                const double cs = std::cos(e.rotation);
                const double sn = std::sin(e.rotation);
                const double xr = (dx * cs + dy * sn) / e.semi_axis_a;
                const double yr = (-dx * sn + dy * cs) / e.semi_axis_b;
                if (xr * xr + yr * yr <= 1.0)
                    (e.intensity >= 0.0 ? pos : neg) += e.intensity;
            }
            img.at(r, c) = pos + neg;
        }
    }
    return img;
}

} // namespace gradratio
