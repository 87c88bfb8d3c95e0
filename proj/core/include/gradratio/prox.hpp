#pragma once

#include <cstdint>

#include "gradratio/types.hpp"

namespace gradratio {

/// Elementwise soft thresholding sign(v)*max(|v|-mu, 0) on both channels.
/// mu must be positive.
GradientField shrink(const GradientField& v, double mu);
void shrink_into(const GradientField& v, double mu, GradientField& out);

enum class HUpdateBranch { scaled_g, random_direction };

struct HUpdateResult {
    GradientField field;
    /// Root of tau^3 - tau^2 = D, >= 1; kept in extended precision so the
    /// optimality residual stays meaningful over the whole D range.
    /// Unused (1) on the random branch.
    long double tau = 1.0L;
    HUpdateBranch branch = HUpdateBranch::scaled_g;
};

/// Root of tau^3 - tau^2 = D for D >= 0, computed from the closed-form
/// cube-root expression and polished by Newton steps. tau(0) = 1 and tau
/// is nondecreasing in D.
long double h_update_tau(double D);

/// Minimizer of a/||h||_2 + (rho2/2)*||h - g||_2^2 over fields h.
/// For g != 0 the solution is tau*g with tau as above and
/// D = a / (rho2*||g||_2^3). For g == 0 it is any vector of norm
/// cbrt(a/rho2); a seeded random direction is returned.
HUpdateResult h_update(const GradientField& g, double a, double rho2,
                       std::uint64_t rng_seed);

/// Elementwise exact minimizer of mu*|d|^p + (d-v)^2/2 for p = 1/2 (the
/// half-thresholding operator); the only supported p. Ties at the
/// threshold resolve to 0.
GradientField lp_prox(const GradientField& v, double mu, double p = 0.5);
void lp_prox_into(const GradientField& v, double mu, double p,
                  GradientField& out);

/// Scalar half-thresholding, exposed for tests.
double lp_prox_scalar(double v, double mu);

/// Elementwise clamp to [lo, hi]; lo < hi required.
Image box_project(const Image& u, double lo, double hi);
void box_project_into(const Image& u, double lo, double hi, Image& out);

} // namespace gradratio
