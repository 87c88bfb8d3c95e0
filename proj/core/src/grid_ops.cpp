#include "gradratio/grid_ops.hpp"

#include <cassert>
#include <cmath>

namespace gradratio {

void gradient_into(const Image& u, GradientField& out) {
    const int m = u.height, n = u.width;
    if (out.height != m || out.width != n) out = GradientField(m, n);
    for (int r = 0; r < m; ++r) {
        const std::size_t row = static_cast<std::size_t>(r) * n;
        for (int c = 0; c < n; ++c) {
            const std::size_t i = row + c;
            out.x[i] = (c + 1 < n) ? u.data[i + 1] - u.data[i] : 0.0;
            out.y[i] = (r + 1 < m) ? u.data[i + n] - u.data[i] : 0.0;
        }
    }
}

GradientField gradient(const Image& u) {
    GradientField g(u.height, u.width);
    gradient_into(u, g);
    return g;
}

void divergence_adjoint_into(const GradientField& p, Image& out) {
    const int m = p.height, n = p.width;
    if (out.height != m || out.width != n) out = Image(m, n);
    for (int r = 0; r < m; ++r) {
        const std::size_t row = static_cast<std::size_t>(r) * n;
        for (int c = 0; c < n; ++c) {
            const std::size_t i = row + c;
            double v = 0.0;
            if (c >= 1) v += p.x[i - 1];
            if (c + 1 < n) v -= p.x[i];
            if (r >= 1) v += p.y[i - n];
            if (r + 1 < m) v -= p.y[i];
            out.data[i] = v;
        }
    }
}

Image divergence_adjoint(const GradientField& p) {
    Image u(p.height, p.width);
    divergence_adjoint_into(p, u);
    return u;
}

Norms norms(const Image& u) {
    Norms out;
    double sq = 0.0;
    for (double v : u.data) {
        out.l1 += std::abs(v);
        sq += v * v;
    }
    out.l2 = std::sqrt(sq);
    return out;
}

Norms norms(const GradientField& p) {
    Norms out;
    double sq = 0.0;
    for (double v : p.x) {
        out.l1 += std::abs(v);
        sq += v * v;
    }
    for (double v : p.y) {
        out.l1 += std::abs(v);
        sq += v * v;
    }
    out.l2 = std::sqrt(sq);
    return out;
}

double dot(const Image& a, const Image& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

double dot(const GradientField& a, const GradientField& b) {
    assert(a.pixels() == b.pixels());
    double s = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) s += a.x[i] * b.x[i];
    for (std::size_t i = 0; i < a.y.size(); ++i) s += a.y[i] * b.y[i];
    return s;
}

} // namespace gradratio
