#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradratio/projector.hpp"
#include "gradratio/types.hpp"

namespace gradratio {

enum class Fidelity { ls, wls };

struct BoxBounds {
    double lo = 0.0;
    double hi = 1.0;
};

/// All solver tunables. rho1 and rho2 are tied to the same value by the
/// command line unless overridden individually.
struct SolverConfig {
    double lambda = 0.1;      // fidelity weight
    double rho1 = 1.0;        // d-split penalty
    double rho2 = 1.0;        // h-split penalty
    double beta = 1.0;        // box-split penalty
    std::optional<BoxBounds> box;
    Fidelity fidelity = Fidelity::ls;
    int k_max = 300;          // outer iteration cap
    int j_max = 5;            // inner ADMM sweeps per outer iteration
    double eps_rel = 1e-5;    // relative-change stopping threshold
    double cg_tol = 1e-8;     // relative CG residual
    int cg_max_iters = 50;
    bool cg_tol_schedule = false; // tol_k = cg_tol * 0.9^k
    double eps_h_min = 1e-12; // ||h|| below this counts as divergence
    std::uint64_t rng_seed = 0;
    int image_height = 0;     // 0,0 -> square side inferred from A.cols
    int image_width = 0;
};

enum class SolverKind { l1l2, tv, lp, l1ml2, sart };

/// Per-solver defaults; tv and lp run a single 500-iteration loop.
SolverConfig default_config(SolverKind kind);

struct ConvergenceTrace {
    std::vector<double> objective;  // regularizer + fidelity
    std::vector<double> lagrangian; // augmented Lagrangian of the split
    std::vector<double> rel_change; // ||u_k - u_{k-1}|| / ||u_k||
    std::vector<double> h_norm;     // 0 for solvers without an h-split
    std::vector<double> rmse;       // NaN when no ground truth was given
    std::vector<double> seconds;    // wall time since solver start
    bool has_rmse = false;
    bool hit_iteration_cap = false;
    /// Outer iterations whose augmented Lagrangian rose by more than
    /// 1e-8*(1+|L|); a persistent nonzero count flags too small a rho2.
    int descent_violations = 0;

    std::size_t size() const { return objective.size(); }
};

/// ||h|| dropped below the configured sentinel; carries the partial trace
/// and the last iterate so callers can still persist diagnostics.
class divergence_error : public std::runtime_error {
  public:
    divergence_error(const std::string& what, ConvergenceTrace trace,
                     Image last)
        : std::runtime_error(what), trace_(std::move(trace)),
          last_(std::move(last)) {}

    const ConvergenceTrace& trace() const { return trace_; }
    const Image& last_iterate() const { return last_; }

  private:
    ConvergenceTrace trace_;
    Image last_;
};

struct ReconResult {
    Image image;
    ConvergenceTrace trace;
};

/// Per-measurement weights w = exp(-f) for the weighted least-squares
/// fidelity.
struct WlsWeights {
    std::vector<double> w;
};
WlsWeights wls_weights(const Sinogram& f);

/// Optional starting state for the gradient-ratio solver (tests use this
/// to start at a known point with consistent auxiliaries).
struct L1L2Init {
    Image u;
    GradientField h;
    GradientField d;
    GradientField b1;
    GradientField b2;
    std::optional<Image> v;
    std::optional<Image> e;
};

/// View of the state after the k-th outer update (h and b2 freshly
/// updated); valid only during the callback.
struct L1L2OuterState {
    int k;
    const Image& u;
    const GradientField& grad_u;
    double grad_l1;
    const GradientField& h;
    const GradientField& b2;
};
using L1L2Observer = std::function<void(const L1L2OuterState&)>;

/// L1-over-L2-on-the-gradient reconstruction via nested ADMM. Runs the
/// box-constrained variant when cfg.box is set, otherwise the
/// unconstrained one. Throws divergence_error when ||h|| falls below
/// cfg.eps_h_min.
ReconResult reconstruct_l1l2(const SparseProjector& A, const Sinogram& f,
                             const SolverConfig& cfg,
                             const Image* ground_truth = nullptr,
                             const L1L2Init* init = nullptr,
                             const L1L2Observer& observer = {});

/// Anisotropic TV (L1 on the gradient), single-loop ADMM with an optional
/// box split.
ReconResult reconstruct_tv(const SparseProjector& A, const Sinogram& f,
                           const SolverConfig& cfg,
                           const Image* ground_truth = nullptr);

/// Same scheme with the soft shrinkage replaced by half thresholding
/// (L_{1/2} on the gradient).
ReconResult reconstruct_lp(const SparseProjector& A, const Sinogram& f,
                           const SolverConfig& cfg,
                           const Image* ground_truth = nullptr);

/// L1-minus-L2 on the gradient via DCA: each outer iteration linearizes
/// -||grad u||_2 and runs j_max inner ADMM sweeps on the TV-plus-linear
/// subproblem.
ReconResult reconstruct_l1_minus_l2(const SparseProjector& A,
                                    const Sinogram& f,
                                    const SolverConfig& cfg,
                                    const Image* ground_truth = nullptr);

/// SART sweeps u += omega * V^-1 A^T W (f - A u) with V = diag of column
/// sums of |A| and W = diag of inverse row sums; zero-sum rows/columns
/// are skipped. Clamped to the box after every sweep when given.
ReconResult reconstruct_sart(const SparseProjector& A, const Sinogram& f,
                             double omega, int iters,
                             std::optional<BoxBounds> box,
                             const Image* ground_truth = nullptr,
                             int image_height = 0, int image_width = 0);

struct LagrangianValue {
    double value = 0.0;
    bool box_feasible = true; // false instead of an infinite value
};

/// Augmented Lagrangian of the gradient-ratio split at (u, h, b2):
/// ||grad u||_1/||h|| + (lambda/2)||Au-f||^2_W + rho2<b2, grad u - h>
/// + (rho2/2)||h - grad u||^2. Throws std::invalid_argument when h = 0.
LagrangianValue evaluate_lagrangian(const SparseProjector& A,
                                    const Sinogram& f,
                                    const SolverConfig& cfg, const Image& u,
                                    const GradientField& h,
                                    const GradientField& b2);

} // namespace gradratio
