#include "gradratio/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "gradratio/assess.hpp"
#include "gradratio/cg.hpp"
#include "gradratio/grid_ops.hpp"
#include "gradratio/prox.hpp"
#include "gradratio/rng.hpp"

namespace gradratio {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Shape {
    int h = 0, w = 0;
};

Shape infer_shape(const SparseProjector& A, int height, int width) {
    if (height > 0 && width > 0) {
        if (static_cast<std::size_t>(height) * width != A.cols)
            throw std::invalid_argument(
                "solver: image dimensions do not match the matrix columns");
        return {height, width};
    }
    const auto side = static_cast<int>(
        std::llround(std::sqrt(static_cast<double>(A.cols))));
    if (static_cast<std::size_t>(side) * side != A.cols)
        throw std::invalid_argument(
            "solver: matrix columns are not a square; pass image dimensions");
    return {side, side};
}

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.lambda > 0.0) || !(cfg.rho1 > 0.0) || !(cfg.rho2 > 0.0) ||
        !(cfg.beta > 0.0))
        throw std::invalid_argument("solver: penalty parameters must be positive");
    if (cfg.box && !(cfg.box->lo < cfg.box->hi))
        throw std::invalid_argument("solver: box bounds need lo < hi");
    if (cfg.k_max < 1 || cfg.j_max < 1)
        throw std::invalid_argument("solver: iteration caps must be >= 1");
    if (!(cfg.eps_rel > 0.0) || !(cfg.cg_tol > 0.0) || cfg.cg_max_iters < 1)
        throw std::invalid_argument("solver: bad stopping parameters");
    if (!(cfg.eps_h_min > 0.0))
        throw std::invalid_argument("solver: eps_h_min must be positive");
}

void check_shapes(const SparseProjector& A, const Sinogram& f,
                  const Image* gt, const Shape& s) {
    if (f.size() != A.rows)
        throw std::invalid_argument("solver: sinogram size does not match matrix");
    if (gt && (gt->height != s.h || gt->width != s.w))
        throw std::invalid_argument("solver: ground truth shape mismatch");
}

/// ||a - b|| / ||a||; 0 when both vanish, +inf when only ||a|| does.
double relative_change(const Image& a, const Image& b) {
    double dn = 0.0, an = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        dn += d * d;
        an += a.data[i] * a.data[i];
    }
    if (an > 0.0) return std::sqrt(dn) / std::sqrt(an);
    return dn == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

/// Unit-norm field in the null space of the gradient adjoint (entries the
/// Neumann boundary zeroes out), so the first u-update sees no spurious
/// right-hand side while ||h|| starts at 1.
GradientField initial_h(int m, int n) {
    GradientField h(m, n);
    const double a = 1.0 / std::sqrt(static_cast<double>(m) + n);
    for (int r = 0; r < m; ++r) h.x[static_cast<std::size_t>(r) * n + n - 1] = a;
    for (int c = 0; c < n; ++c)
        h.y[static_cast<std::size_t>(m - 1) * n + c] = a;
    return h;
}

/// Shared fidelity machinery: weighted residual, lambda*A^T W f, and the
/// normal-operator part lambda*A^T W A.
struct FidelityCtx {
    const SparseProjector& A;
    double lambda;
    std::vector<double> w; // empty for plain least squares
    mutable Sinogram sino_scratch;

    FidelityCtx(const SparseProjector& a, const Sinogram& f,
                const SolverConfig& cfg)
        : A(a), lambda(cfg.lambda),
          sino_scratch(f.detectors, f.angles) {
        if (cfg.fidelity == Fidelity::wls) w = wls_weights(f).w;
    }

    Image weighted_backprojection(const Sinogram& f, int h, int wd) const {
        Image out(h, wd);
        if (w.empty()) {
            adjoint_into(A, f, out);
        } else {
            Sinogram wf = f;
            for (std::size_t i = 0; i < wf.data.size(); ++i) wf.data[i] *= w[i];
            adjoint_into(A, wf, out);
        }
        for (double& v : out.data) v *= lambda;
        return out;
    }

    /// out = lambda * A^T W A x (overwrites out).
    void apply_normal(const Image& x, Image& out) const {
        forward_into(A, x, sino_scratch);
        if (!w.empty())
            for (std::size_t i = 0; i < w.size(); ++i)
                sino_scratch.data[i] *= w[i];
        adjoint_into(A, sino_scratch, out);
        for (double& v : out.data) v *= lambda;
    }

    /// (lambda/2) ||A u - f||^2_W.
    double value(const Image& u, const Sinogram& f) const {
        forward_into(A, u, sino_scratch);
        double s = 0.0;
        for (std::size_t i = 0; i < f.data.size(); ++i) {
            const double r = sino_scratch.data[i] - f.data[i];
            s += (w.empty() ? 1.0 : w[i]) * r * r;
        }
        return 0.5 * lambda * s;
    }
};

double field_dot_diff(const GradientField& b, const GradientField& p,
                      const GradientField& q) {
    // <b, p - q>
    double s = 0.0;
    for (std::size_t i = 0; i < b.x.size(); ++i) s += b.x[i] * (p.x[i] - q.x[i]);
    for (std::size_t i = 0; i < b.y.size(); ++i) s += b.y[i] * (p.y[i] - q.y[i]);
    return s;
}

double field_diff_sq(const GradientField& p, const GradientField& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        const double d = p.x[i] - q.x[i];
        s += d * d;
    }
    for (std::size_t i = 0; i < p.y.size(); ++i) {
        const double d = p.y[i] - q.y[i];
        s += d * d;
    }
    return s;
}

bool inside_box(const Image& u, const BoxBounds& b) {
    for (double v : u.data)
        if (v < b.lo || v > b.hi) return false;
    return true;
}

void push_row(ConvergenceTrace& t, double obj, double lagr, double rel,
              double hn, double rm, double sec) {
    if (!t.lagrangian.empty()) {
        const double prev = t.lagrangian.back();
        if (lagr > prev + 1e-8 * (1.0 + std::abs(prev))) ++t.descent_violations;
    }
    t.objective.push_back(obj);
    t.lagrangian.push_back(lagr);
    t.rel_change.push_back(rel);
    t.h_norm.push_back(hn);
    t.rmse.push_back(rm);
    t.seconds.push_back(sec);
}

} // namespace

SolverConfig default_config(SolverKind kind) {
    SolverConfig cfg;
    if (kind == SolverKind::tv || kind == SolverKind::lp) {
        cfg.k_max = 500;
        cfg.j_max = 1;
    }
    return cfg;
}

WlsWeights wls_weights(const Sinogram& f) {
    WlsWeights out;
    out.w.resize(f.size());
    for (std::size_t i = 0; i < f.data.size(); ++i)
        out.w[i] = std::exp(-f.data[i]);
    return out;
}

LagrangianValue evaluate_lagrangian(const SparseProjector& A,
                                    const Sinogram& f,
                                    const SolverConfig& cfg, const Image& u,
                                    const GradientField& h,
                                    const GradientField& b2) {
    const Norms hn = norms(h);
    if (hn.l2 == 0.0)
        throw std::invalid_argument("evaluate_lagrangian: ||h|| must be positive");
    FidelityCtx fid(A, f, cfg);
    const GradientField gu = gradient(u);
    LagrangianValue out;
    out.value = norms(gu).l1 / hn.l2 + fid.value(u, f) +
                cfg.rho2 * field_dot_diff(b2, gu, h) +
                0.5 * cfg.rho2 * field_diff_sq(h, gu);
    out.box_feasible = !cfg.box || inside_box(u, *cfg.box);
    return out;
}

ReconResult reconstruct_l1l2(const SparseProjector& A, const Sinogram& f,
                             const SolverConfig& cfg, const Image* ground_truth,
                             const L1L2Init* init, const L1L2Observer& observer) {
    validate_config(cfg);
    const Shape s = infer_shape(A, cfg.image_height, cfg.image_width);
    check_shapes(A, f, ground_truth, s);

    const bool box = cfg.box.has_value();
    const double rho1 = cfg.rho1, rho2 = cfg.rho2, beta = cfg.beta;

    Image u = init ? init->u : Image(s.h, s.w);
    GradientField h = init ? init->h : initial_h(s.h, s.w);
    GradientField d = init ? init->d : GradientField(s.h, s.w);
    GradientField b1 = init ? init->b1 : GradientField(s.h, s.w);
    GradientField b2 = init ? init->b2 : GradientField(s.h, s.w);
    Image e = init && init->e ? *init->e : Image(s.h, s.w);
    Image v(s.h, s.w);
    if (box) {
        if (init && init->v) {
            v = *init->v;
        } else {
            for (std::size_t i = 0; i < v.data.size(); ++i)
                v.data[i] = std::clamp(u.data[i] + e.data[i], cfg.box->lo,
                                       cfg.box->hi);
        }
    }

    FidelityCtx fid(A, f, cfg);
    const Image atf = fid.weighted_backprojection(f, s.h, s.w);

    GradientField gu(s.h, s.w), field_tmp(s.h, s.w);
    Image img_tmp(s.h, s.w);

    const LinearOp apply_M = [&](const Image& in, Image& out) {
        fid.apply_normal(in, out); // lambda A^T W A in
        gradient_into(in, field_tmp);
        divergence_adjoint_into(field_tmp, img_tmp);
        const double rr = rho1 + rho2;
        if (box) {
            for (std::size_t i = 0; i < out.data.size(); ++i)
                out.data[i] += rr * img_tmp.data[i] + beta * in.data[i];
        } else {
            for (std::size_t i = 0; i < out.data.size(); ++i)
                out.data[i] += rr * img_tmp.data[i];
        }
    };

    ConvergenceTrace trace;
    trace.has_rmse = ground_truth != nullptr;
    const auto t0 = Clock::now();

    Image rhs(s.h, s.w), u_prev(s.h, s.w), u_in(s.h, s.w);

    for (int k = 0; k < cfg.k_max; ++k) {
        const double cg_tol_k =
            cfg.cg_tol_schedule ? cfg.cg_tol * std::pow(0.9, k) : cfg.cg_tol;
        const double h_l2 = norms(h).l2;
        if (h_l2 < cfg.eps_h_min)
            throw divergence_error("reconstruct_l1l2: ||h|| below eps", trace, u);
        const double shrink_mu = 1.0 / (rho1 * h_l2);

        u_prev = u;
        for (int j = 0; j < cfg.j_max; ++j) {
            u_in = u;
            // rhs = lambda A^T W f + div^T(rho1 (d - b1) + rho2 (h - b2))
            //       [+ beta (v - e)]
            for (std::size_t i = 0; i < field_tmp.x.size(); ++i)
                field_tmp.x[i] = rho1 * (d.x[i] - b1.x[i]) + rho2 * (h.x[i] - b2.x[i]);
            for (std::size_t i = 0; i < field_tmp.y.size(); ++i)
                field_tmp.y[i] = rho1 * (d.y[i] - b1.y[i]) + rho2 * (h.y[i] - b2.y[i]);
            divergence_adjoint_into(field_tmp, img_tmp);
            if (box) {
                for (std::size_t i = 0; i < rhs.data.size(); ++i)
                    rhs.data[i] = atf.data[i] + img_tmp.data[i] +
                                  beta * (v.data[i] - e.data[i]);
            } else {
                for (std::size_t i = 0; i < rhs.data.size(); ++i)
                    rhs.data[i] = atf.data[i] + img_tmp.data[i];
            }

            u = cg_solve(apply_M, rhs, u, cg_tol_k, cfg.cg_max_iters).x;

            gradient_into(u, gu);
            for (std::size_t i = 0; i < field_tmp.x.size(); ++i)
                field_tmp.x[i] = gu.x[i] + b1.x[i];
            for (std::size_t i = 0; i < field_tmp.y.size(); ++i)
                field_tmp.y[i] = gu.y[i] + b1.y[i];
            shrink_into(field_tmp, shrink_mu, d);
            if (box)
                for (std::size_t i = 0; i < v.data.size(); ++i)
                    v.data[i] = std::clamp(u.data[i] + e.data[i], cfg.box->lo,
                                           cfg.box->hi);
            for (std::size_t i = 0; i < b1.x.size(); ++i)
                b1.x[i] += gu.x[i] - d.x[i];
            for (std::size_t i = 0; i < b1.y.size(); ++i)
                b1.y[i] += gu.y[i] - d.y[i];
            if (box)
                for (std::size_t i = 0; i < e.data.size(); ++i)
                    e.data[i] += u.data[i] - v.data[i];

            if (relative_change(u, u_in) <= cfg.eps_rel) break;
        }

        const double rel = relative_change(u, u_prev);
        gradient_into(u, gu);
        const Norms gn = norms(gu);
        const double objective =
            (gn.l2 > 0.0 ? gn.l1 / gn.l2 : 0.0) + fid.value(u, f);
        const double rm =
            ground_truth ? rmse(u, *ground_truth, nullptr) : kNaN;

        const bool stopping = rel <= cfg.eps_rel || k == cfg.k_max - 1;
        if (stopping) {
            const double lagr = evaluate_lagrangian(A, f, cfg, u, h, b2).value;
            push_row(trace, objective, lagr, rel, norms(h).l2, rm,
                     seconds_since(t0));
            trace.hit_iteration_cap = rel > cfg.eps_rel;
            break;
        }

        // h-update at g = grad u + b2, then dual ascent b2 <- g - h.
        for (std::size_t i = 0; i < field_tmp.x.size(); ++i)
            field_tmp.x[i] = gu.x[i] + b2.x[i];
        for (std::size_t i = 0; i < field_tmp.y.size(); ++i)
            field_tmp.y[i] = gu.y[i] + b2.y[i];
        HUpdateResult hr =
            h_update(field_tmp, gn.l1, rho2, Rng::mix(cfg.rng_seed, k));
        h = std::move(hr.field);
        for (std::size_t i = 0; i < b2.x.size(); ++i)
            b2.x[i] = field_tmp.x[i] - h.x[i];
        for (std::size_t i = 0; i < b2.y.size(); ++i)
            b2.y[i] = field_tmp.y[i] - h.y[i];

        const double h_l2_new = norms(h).l2;
        const double lagr = evaluate_lagrangian(A, f, cfg, u, h, b2).value;
        push_row(trace, objective, lagr, rel, h_l2_new, rm, seconds_since(t0));

        if (observer)
            observer(L1L2OuterState{k, u, gu, gn.l1, h, b2});

        if (h_l2_new < cfg.eps_h_min)
            throw divergence_error("reconstruct_l1l2: ||h|| below eps", trace, u);
    }

    if (box)
        for (double& x : u.data) x = std::clamp(x, cfg.box->lo, cfg.box->hi);
    return {std::move(u), std::move(trace)};
}

namespace {

/// Shared single-loop ADMM for TV (shrink) and Lp (half thresholding),
/// and the inner solver of the L1-minus-L2 scheme when a linear term
/// div^T q is supplied.
struct TvLikeOptions {
    bool half_threshold = false;
    const GradientField* linear_q = nullptr; // DCA linearization direction
};

double reg_value(const GradientField& d, bool half) {
    if (!half) return norms(d).l1;
    double s = 0.0;
    for (double v : d.x) s += std::sqrt(std::abs(v));
    for (double v : d.y) s += std::sqrt(std::abs(v));
    return s;
}

struct TvState {
    Image u;
    GradientField d, b1;
    Image v, e;
};

/// One ADMM sweep on min reg(d) - <q, grad u> + fidelity s.t. d = grad u
/// (+ box split). Returns the relative change of u.
double tv_sweep(TvState& st, const Image& atf, const SolverConfig& cfg,
                const TvLikeOptions& opt, const Image* div_q,
                const LinearOp& apply_M, double cg_tol_k, GradientField& gu,
                GradientField& field_tmp, Image& img_tmp, Image& rhs,
                Image& u_in) {
    const bool box = cfg.box.has_value();
    u_in = st.u;
    for (std::size_t i = 0; i < field_tmp.x.size(); ++i)
        field_tmp.x[i] = cfg.rho1 * (st.d.x[i] - st.b1.x[i]);
    for (std::size_t i = 0; i < field_tmp.y.size(); ++i)
        field_tmp.y[i] = cfg.rho1 * (st.d.y[i] - st.b1.y[i]);
    divergence_adjoint_into(field_tmp, img_tmp);
    for (std::size_t i = 0; i < rhs.data.size(); ++i) {
        double r = atf.data[i] + img_tmp.data[i];
        if (div_q) r += div_q->data[i];
        if (box) r += cfg.beta * (st.v.data[i] - st.e.data[i]);
        rhs.data[i] = r;
    }
    st.u = cg_solve(apply_M, rhs, st.u, cg_tol_k, cfg.cg_max_iters).x;

    gradient_into(st.u, gu);
    for (std::size_t i = 0; i < field_tmp.x.size(); ++i)
        field_tmp.x[i] = gu.x[i] + st.b1.x[i];
    for (std::size_t i = 0; i < field_tmp.y.size(); ++i)
        field_tmp.y[i] = gu.y[i] + st.b1.y[i];
    if (opt.half_threshold)
        lp_prox_into(field_tmp, 1.0 / cfg.rho1, 0.5, st.d);
    else
        shrink_into(field_tmp, 1.0 / cfg.rho1, st.d);
    if (box)
        for (std::size_t i = 0; i < st.v.data.size(); ++i)
            st.v.data[i] = std::clamp(st.u.data[i] + st.e.data[i],
                                      cfg.box->lo, cfg.box->hi);
    for (std::size_t i = 0; i < st.b1.x.size(); ++i)
        st.b1.x[i] += gu.x[i] - st.d.x[i];
    for (std::size_t i = 0; i < st.b1.y.size(); ++i)
        st.b1.y[i] += gu.y[i] - st.d.y[i];
    if (box)
        for (std::size_t i = 0; i < st.e.data.size(); ++i)
            st.e.data[i] += st.u.data[i] - st.v.data[i];
    return relative_change(st.u, u_in);
}

double tv_lagrangian(const TvState& st, const FidelityCtx& fid,
                     const Sinogram& f, const SolverConfig& cfg,
                     const TvLikeOptions& opt, const GradientField& gu) {
    double L = reg_value(st.d, opt.half_threshold) + fid.value(st.u, f);
    if (opt.linear_q) L -= dot(*opt.linear_q, gu);
    L += cfg.rho1 * field_dot_diff(st.b1, gu, st.d);
    L += 0.5 * cfg.rho1 * field_diff_sq(st.d, gu);
    if (cfg.box) {
        double ip = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < st.u.data.size(); ++i) {
            ip += st.e.data[i] * (st.u.data[i] - st.v.data[i]);
            const double dvu = st.v.data[i] - st.u.data[i];
            sq += dvu * dvu;
        }
        L += cfg.beta * ip + 0.5 * cfg.beta * sq;
    }
    return L;
}

ReconResult reconstruct_tv_like(const SparseProjector& A, const Sinogram& f,
                                const SolverConfig& cfg,
                                const Image* ground_truth,
                                const TvLikeOptions& opt) {
    validate_config(cfg);
    const Shape s = infer_shape(A, cfg.image_height, cfg.image_width);
    check_shapes(A, f, ground_truth, s);
    const bool box = cfg.box.has_value();

    TvState st;
    st.u = Image(s.h, s.w);
    st.d = GradientField(s.h, s.w);
    st.b1 = GradientField(s.h, s.w);
    st.v = Image(s.h, s.w);
    st.e = Image(s.h, s.w);
    if (box)
        for (double& x : st.v.data) x = std::clamp(0.0, cfg.box->lo, cfg.box->hi);

    FidelityCtx fid(A, f, cfg);
    const Image atf = fid.weighted_backprojection(f, s.h, s.w);

    GradientField gu(s.h, s.w), field_tmp(s.h, s.w);
    Image img_tmp(s.h, s.w), rhs(s.h, s.w), u_in(s.h, s.w);

    const LinearOp apply_M = [&](const Image& in, Image& out) {
        fid.apply_normal(in, out);
        gradient_into(in, field_tmp);
        divergence_adjoint_into(field_tmp, img_tmp);
        if (box) {
            for (std::size_t i = 0; i < out.data.size(); ++i)
                out.data[i] += cfg.rho1 * img_tmp.data[i] + cfg.beta * in.data[i];
        } else {
            for (std::size_t i = 0; i < out.data.size(); ++i)
                out.data[i] += cfg.rho1 * img_tmp.data[i];
        }
    };

    ConvergenceTrace trace;
    trace.has_rmse = ground_truth != nullptr;
    const auto t0 = Clock::now();

    for (int k = 0; k < cfg.k_max; ++k) {
        const double cg_tol_k =
            cfg.cg_tol_schedule ? cfg.cg_tol * std::pow(0.9, k) : cfg.cg_tol;
        const double rel = tv_sweep(st, atf, cfg, opt, nullptr, apply_M,
                                    cg_tol_k, gu, field_tmp, img_tmp, rhs, u_in);

        const double objective = reg_value(gu, opt.half_threshold) +
                                 fid.value(st.u, f);
        const double lagr = tv_lagrangian(st, fid, f, cfg, opt, gu);
        const double rm =
            ground_truth ? rmse(st.u, *ground_truth, nullptr) : kNaN;
        push_row(trace, objective, lagr, rel, 0.0, rm, seconds_since(t0));

        if (rel <= cfg.eps_rel) break;
        if (k == cfg.k_max - 1) trace.hit_iteration_cap = true;
    }

    Image out = box ? box_project(st.u, cfg.box->lo, cfg.box->hi)
                    : std::move(st.u);
    return {std::move(out), std::move(trace)};
}

} // namespace

ReconResult reconstruct_tv(const SparseProjector& A, const Sinogram& f,
                           const SolverConfig& cfg, const Image* ground_truth) {
    TvLikeOptions opt;
    return reconstruct_tv_like(A, f, cfg, ground_truth, opt);
}

ReconResult reconstruct_lp(const SparseProjector& A, const Sinogram& f,
                           const SolverConfig& cfg, const Image* ground_truth) {
    TvLikeOptions opt;
    opt.half_threshold = true;
    return reconstruct_tv_like(A, f, cfg, ground_truth, opt);
}

ReconResult reconstruct_l1_minus_l2(const SparseProjector& A,
                                    const Sinogram& f, const SolverConfig& cfg,
                                    const Image* ground_truth) {
    validate_config(cfg);
    const Shape s = infer_shape(A, cfg.image_height, cfg.image_width);
    check_shapes(A, f, ground_truth, s);
    const bool box = cfg.box.has_value();

    TvState st;
    st.u = Image(s.h, s.w);
    st.d = GradientField(s.h, s.w);
    st.b1 = GradientField(s.h, s.w);
    st.v = Image(s.h, s.w);
    st.e = Image(s.h, s.w);
    if (box)
        for (double& x : st.v.data) x = std::clamp(0.0, cfg.box->lo, cfg.box->hi);

    FidelityCtx fid(A, f, cfg);
    const Image atf = fid.weighted_backprojection(f, s.h, s.w);

    GradientField gu(s.h, s.w), field_tmp(s.h, s.w), q(s.h, s.w);
    Image img_tmp(s.h, s.w), rhs(s.h, s.w), u_in(s.h, s.w), u_prev(s.h, s.w);
    Image div_q(s.h, s.w);

    TvLikeOptions opt;
    opt.linear_q = &q;

    const LinearOp apply_M = [&](const Image& in, Image& out) {
        fid.apply_normal(in, out);
        gradient_into(in, field_tmp);
        divergence_adjoint_into(field_tmp, img_tmp);
        if (box) {
            for (std::size_t i = 0; i < out.data.size(); ++i)
                out.data[i] += cfg.rho1 * img_tmp.data[i] + cfg.beta * in.data[i];
        } else {
            for (std::size_t i = 0; i < out.data.size(); ++i)
                out.data[i] += cfg.rho1 * img_tmp.data[i];
        }
    };

    ConvergenceTrace trace;
    trace.has_rmse = ground_truth != nullptr;
    const auto t0 = Clock::now();

    for (int k = 0; k < cfg.k_max; ++k) {
        const double cg_tol_k =
            cfg.cg_tol_schedule ? cfg.cg_tol * std::pow(0.9, k) : cfg.cg_tol;

        // Linearize -||grad u||_2 at the current iterate; zero subgradient
        // at grad u = 0.
        gradient_into(st.u, gu);
        const double gnorm = norms(gu).l2;
        if (gnorm > 0.0) {
            for (std::size_t i = 0; i < q.x.size(); ++i) q.x[i] = gu.x[i] / gnorm;
            for (std::size_t i = 0; i < q.y.size(); ++i) q.y[i] = gu.y[i] / gnorm;
        } else {
            std::fill(q.x.begin(), q.x.end(), 0.0);
            std::fill(q.y.begin(), q.y.end(), 0.0);
        }
        divergence_adjoint_into(q, div_q);

        u_prev = st.u;
        for (int j = 0; j < cfg.j_max; ++j) {
            const double rel_inner =
                tv_sweep(st, atf, cfg, opt, &div_q, apply_M, cg_tol_k, gu,
                         field_tmp, img_tmp, rhs, u_in);
            if (rel_inner <= cfg.eps_rel) break;
        }

        const double rel = relative_change(st.u, u_prev);
        gradient_into(st.u, gu);
        const Norms gn = norms(gu);
        const double objective = gn.l1 - gn.l2 + fid.value(st.u, f);
        const double lagr = tv_lagrangian(st, fid, f, cfg, opt, gu);
        const double rm =
            ground_truth ? rmse(st.u, *ground_truth, nullptr) : kNaN;
        push_row(trace, objective, lagr, rel, 0.0, rm, seconds_since(t0));

        if (rel <= cfg.eps_rel) break;
        if (k == cfg.k_max - 1) trace.hit_iteration_cap = true;
    }

    Image out = box ? box_project(st.u, cfg.box->lo, cfg.box->hi)
                    : std::move(st.u);
    return {std::move(out), std::move(trace)};
}

ReconResult reconstruct_sart(const SparseProjector& A, const Sinogram& f,
                             double omega, int iters,
                             std::optional<BoxBounds> box,
                             const Image* ground_truth, int image_height,
                             int image_width) {
    if (!(omega > 0.0) || !(omega < 2.0))
        throw std::invalid_argument("sart: omega must lie in (0, 2)");
    if (iters < 1)
        throw std::invalid_argument("sart: iters must be >= 1");
    if (box && !(box->lo < box->hi))
        throw std::invalid_argument("sart: box bounds need lo < hi");
    const Shape s = infer_shape(A, image_height, image_width);
    check_shapes(A, f, ground_truth, s);

    std::vector<double> inv_row(A.rows, 0.0), inv_col(A.cols, 0.0);
    for (std::size_t r = 0; r < A.rows; ++r) {
        double sum = 0.0;
        for (std::size_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
            sum += std::abs(A.val[k]);
        inv_row[r] = sum > 0.0 ? 1.0 / sum : 0.0;
    }
    for (std::size_t c = 0; c < A.cols; ++c) {
        double sum = 0.0;
        for (std::size_t k = A.col_ptr[c]; k < A.col_ptr[c + 1]; ++k)
            sum += std::abs(A.val_csc[k]);
        inv_col[c] = sum > 0.0 ? 1.0 / sum : 0.0;
    }

    Image u(s.h, s.w), g(s.h, s.w), u_prev(s.h, s.w);
    Sinogram res(f.detectors, f.angles);

    ConvergenceTrace trace;
    trace.has_rmse = ground_truth != nullptr;
    const auto t0 = Clock::now();

    for (int it = 0; it < iters; ++it) {
        u_prev = u;
        forward_into(A, u, res);
        for (std::size_t i = 0; i < res.data.size(); ++i)
            res.data[i] = (f.data[i] - res.data[i]) * inv_row[i];
        adjoint_into(A, res, g);
        for (std::size_t i = 0; i < u.data.size(); ++i)
            u.data[i] += omega * g.data[i] * inv_col[i];
        if (box)
            for (double& x : u.data) x = std::clamp(x, box->lo, box->hi);

        forward_into(A, u, res);
        double fit = 0.0;
        for (std::size_t i = 0; i < res.data.size(); ++i) {
            const double r = res.data[i] - f.data[i];
            fit += r * r;
        }
        const double objective = 0.5 * fit;
        const double rel = relative_change(u, u_prev);
        const double rm =
            ground_truth ? rmse(u, *ground_truth, nullptr) : kNaN;
        push_row(trace, objective, objective, rel, 0.0, rm, seconds_since(t0));
    }
    trace.hit_iteration_cap = true;
    return {std::move(u), std::move(trace)};
}

} // namespace gradratio
