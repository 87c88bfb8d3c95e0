#pragma once

#include <functional>

#include "gradratio/types.hpp"

namespace gradratio {

using LinearOp = std::function<void(const Image& in, Image& out)>;

struct CgResult {
    Image x;
    double residual_norm = 0.0;
    int iters = 0;
};

/// Conjugate gradients for a symmetric positive definite operator on
/// images. Stops when ||M x - rhs||_2 <= tol * ||rhs||_2 or after
/// max_iters; warm-started from x0. Throws numerical_breakdown when a
/// non-finite value or a nonpositive curvature p'Mp shows up.
CgResult cg_solve(const LinearOp& apply_M, const Image& rhs, const Image& x0,
                  double tol, int max_iters);

} // namespace gradratio
