#pragma once

#include <cstddef>
#include <vector>

namespace gradratio {

/// Real-valued m-by-n pixel grid, stored row-major in 64-bit floats.
/// Row r, column c lives at data[r*width + c].
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Image() = default;
    Image(int m, int n, double fill = 0.0)
        : height(m), width(n),
          data(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), fill) {}

    std::size_t size() const { return data.size(); }

    double& at(int r, int c) {
        return data[static_cast<std::size_t>(r) * width + c];
    }
    double at(int r, int c) const {
        return data[static_cast<std::size_t>(r) * width + c];
    }

    bool same_shape(const Image& o) const {
        return height == o.height && width == o.width;
    }
};

/// Two-channel field on the pixel grid. Channel x holds differences along
/// the width (column) direction, channel y along the height (row) direction.
struct GradientField {
    int height = 0;
    int width = 0;
    std::vector<double> x, y;

    GradientField() = default;
    GradientField(int m, int n, double fill = 0.0)
        : height(m), width(n),
          x(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), fill),
          y(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), fill) {}

    std::size_t pixels() const { return x.size(); }

    bool same_shape(const GradientField& o) const {
        return height == o.height && width == o.width;
    }
};

} // namespace gradratio
