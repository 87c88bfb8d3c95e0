#pragma once

#include "gradratio/types.hpp"

namespace gradratio {

/// One additive ellipse of the head phantom, on the [-1,1]^2 support.
struct EllipseSpec {
    double intensity;
    double center_x;
    double center_y;
    double semi_axis_a;
    double semi_axis_b;
    double rotation; // radians, counterclockwise
};

enum class PhantomVariant { high_contrast, low_contrast };

/// Rasterizes the ten-ellipse Shepp-Logan phantom at size-by-size pixels.
/// high_contrast uses the modified intensity table (values in [0,1]),
/// low_contrast the original one. A pixel's value is the sum of the
/// intensities of the ellipses containing its center; pixel centers sit
/// at cell midpoints of a [-1,1]^2 support. Throws std::invalid_argument
/// for size < 16.
Image shepp_logan(int size, PhantomVariant variant);

/// The underlying ellipse table, exposed for inspection/tests.
const EllipseSpec* shepp_logan_table(PhantomVariant variant, int* count);

} // namespace gradratio
