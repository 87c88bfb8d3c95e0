#include "gradratio/cg.hpp"

#include <cmath>
#include <stdexcept>

#include "gradratio/errors.hpp"
#include "gradratio/grid_ops.hpp"

namespace gradratio {

CgResult cg_solve(const LinearOp& apply_M, const Image& rhs, const Image& x0,
                  double tol, int max_iters) {
    if (!rhs.same_shape(x0))
        throw std::invalid_argument("cg_solve: rhs/x0 shape mismatch");
    if (!(tol > 0.0))
        throw std::invalid_argument("cg_solve: tol must be positive");
    if (max_iters < 1)
        throw std::invalid_argument("cg_solve: max_iters must be >= 1");

    CgResult res;
    res.x = x0;

    const double bnorm = norms(rhs).l2;
    if (bnorm == 0.0) {
        res.x = Image(rhs.height, rhs.width); // exact solution of M x = 0
        return res;
    }
    const double threshold = tol * bnorm;

    Image r(rhs.height, rhs.width), v(rhs.height, rhs.width);
    apply_M(res.x, v);
    for (std::size_t i = 0; i < r.data.size(); ++i)
        r.data[i] = rhs.data[i] - v.data[i];
    Image p = r;
    double rs = dot(r, r);
    if (!std::isfinite(rs)) throw numerical_breakdown("cg_solve: residual");

    while (res.iters < max_iters && std::sqrt(rs) > threshold) {
        apply_M(p, v);
        const double pv = dot(p, v);
        if (!std::isfinite(pv) || pv <= 0.0)
            throw numerical_breakdown("cg_solve: curvature");
        const double alpha = rs / pv;
        for (std::size_t i = 0; i < r.data.size(); ++i) {
            res.x.data[i] += alpha * p.data[i];
            r.data[i] -= alpha * v.data[i];
        }
        const double rs_new = dot(r, r);
        if (!std::isfinite(rs_new)) throw numerical_breakdown("cg_solve: residual");
        const double beta = rs_new / rs;
        for (std::size_t i = 0; i < p.data.size(); ++i)
            p.data[i] = r.data[i] + beta * p.data[i];
        rs = rs_new;
        ++res.iters;
    }
    res.residual_norm = std::sqrt(rs);
    return res;
}

} // namespace gradratio
