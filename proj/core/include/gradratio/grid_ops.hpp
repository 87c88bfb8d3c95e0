#pragma once

#include "gradratio/types.hpp"

namespace gradratio {

struct Norms {
    double l1 = 0.0;
    double l2 = 0.0;
};

/// Forward differences with Neumann boundary: the difference is set to
/// zero at the last index of each direction. channel x differentiates
/// along the width, channel y along the height.
GradientField gradient(const Image& u);
void gradient_into(const Image& u, GradientField& out);

/// Exact adjoint of `gradient` under the standard inner products,
/// i.e. <gradient(u), p> == <u, divergence_adjoint(p)>.
Image divergence_adjoint(const GradientField& p);
void divergence_adjoint_into(const GradientField& p, Image& out);

/// l1 = sum of |entries| (both channels for fields), l2 = Euclidean norm.
Norms norms(const Image& u);
Norms norms(const GradientField& p);

double dot(const Image& a, const Image& b);
double dot(const GradientField& a, const GradientField& b);

} // namespace gradratio
