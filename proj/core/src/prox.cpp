#include "gradratio/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gradratio/grid_ops.hpp"
#include "gradratio/rng.hpp"

namespace gradratio {

namespace {

inline double soft(double v, double mu) {
    const double m = std::abs(v) - mu;
    return m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
}

} // namespace

void shrink_into(const GradientField& v, double mu, GradientField& out) {
    if (!(mu > 0.0))
        throw std::invalid_argument("shrink: mu must be positive");
    if (!out.same_shape(v)) out = GradientField(v.height, v.width);
    for (std::size_t i = 0; i < v.x.size(); ++i) out.x[i] = soft(v.x[i], mu);
    for (std::size_t i = 0; i < v.y.size(); ++i) out.y[i] = soft(v.y[i], mu);
}

GradientField shrink(const GradientField& v, double mu) {
    GradientField out(v.height, v.width);
    shrink_into(v, mu, out);
    return out;
}

long double h_update_tau(double D) {
    if (!(D >= 0.0))
        throw std::invalid_argument("h_update_tau: D must be nonnegative");
    // Below this the discriminant rounds negative; the exact limit is 1.
    if (D < 1e-15) return 1.0L;

    const long double d = D;
    long double tau;
    if (d > 1e250L) {
        // (27D)^2 would overflow; start from the asymptotic root instead.
        tau = cbrtl(d) + 1.0L / 3.0L;
    } else {
        const long double q = 27.0L * d + 2.0L;
        // (27D+2)^2 - 4 expanded as 27D*(27D+4) to avoid cancellation near 0.
        const long double disc = 27.0L * d * (27.0L * d + 4.0L);
        const long double C = cbrtl(0.5L * (q + sqrtl(disc)));
        tau = (1.0L + C + 1.0L / C) / 3.0L;
    }

    // Newton polish on tau^2*(tau-1) = D.
    for (int i = 0; i < 3; ++i) {
        const long double f = tau * tau * (tau - 1.0L) - d;
        const long double fp = tau * (3.0L * tau - 2.0L);
        if (fp <= 0.0L) break;
        tau -= f / fp;
    }
    return tau < 1.0L ? 1.0L : tau;
}

HUpdateResult h_update(const GradientField& g, double a, double rho2,
                       std::uint64_t rng_seed) {
    if (!(rho2 > 0.0))
        throw std::invalid_argument("h_update: rho2 must be positive");
    if (!(a >= 0.0))
        throw std::invalid_argument("h_update: a must be nonnegative");

    HUpdateResult res;
    const double gnorm = norms(g).l2;
    if (gnorm > 0.0) {
        const double D = a / (rho2 * gnorm * gnorm * gnorm);
        res.tau = h_update_tau(D);
        res.branch = HUpdateBranch::scaled_g;
        res.field = GradientField(g.height, g.width);
        const double t = static_cast<double>(res.tau);
        for (std::size_t i = 0; i < g.x.size(); ++i) res.field.x[i] = t * g.x[i];
        for (std::size_t i = 0; i < g.y.size(); ++i) res.field.y[i] = t * g.y[i];
        return res;
    }

    // g == 0: any point of norm cbrt(a/rho2) minimizes; draw a direction.
    res.branch = HUpdateBranch::random_direction;
    res.field = GradientField(g.height, g.width);
    const double target = std::cbrt(a / rho2);
    if (target == 0.0) return res;

    Rng rng(rng_seed);
    double sq = 0.0;
    do {
        for (double& v : res.field.x) {
            v = rng.next_normal();
            sq += v * v;
        }
        for (double& v : res.field.y) {
            v = rng.next_normal();
            sq += v * v;
        }
    } while (sq == 0.0);
    const double scale = target / std::sqrt(sq);
    for (double& v : res.field.x) v *= scale;
    for (double& v : res.field.y) v *= scale;
    return res;
}

double lp_prox_scalar(double v, double mu) {
    // Half thresholding for mu*|d|^(1/2) + (d-v)^2/2, i.e. the closed-form
    // prox of Xu et al. with their lambda equal to 2*mu. Their threshold
    // (cbrt(54)/4)*lambda^(2/3) simplifies to 1.5*mu^(2/3). At |v| == T
    // both 0 and the root attain the minimum; return 0.
    const double lam = 2.0 * mu;
    const double T = 1.5 * std::cbrt(mu * mu);
    const double av = std::abs(v);
    if (av <= T) return 0.0;
    const double arg = (lam / 8.0) * std::pow(av / 3.0, -1.5);
    const double phi = std::acos(std::clamp(arg, -1.0, 1.0));
    const double r =
        (2.0 / 3.0) * av *
        (1.0 + std::cos(2.0943951023931953 - (2.0 / 3.0) * phi));
    return v > 0.0 ? r : -r;
}

void lp_prox_into(const GradientField& v, double mu, double p,
                  GradientField& out) {
    if (p != 0.5)
        throw std::invalid_argument("lp_prox: only p = 0.5 is supported");
    if (!(mu > 0.0))
        throw std::invalid_argument("lp_prox: mu must be positive");
    if (!out.same_shape(v)) out = GradientField(v.height, v.width);
    for (std::size_t i = 0; i < v.x.size(); ++i)
        out.x[i] = lp_prox_scalar(v.x[i], mu);
    for (std::size_t i = 0; i < v.y.size(); ++i)
        out.y[i] = lp_prox_scalar(v.y[i], mu);
}

GradientField lp_prox(const GradientField& v, double mu, double p) {
    GradientField out(v.height, v.width);
    lp_prox_into(v, mu, p, out);
    return out;
}

void box_project_into(const Image& u, double lo, double hi, Image& out) {
    if (!(lo < hi))
        throw std::invalid_argument("box_project: need lo < hi");
    if (!out.same_shape(u)) out = Image(u.height, u.width);
    for (std::size_t i = 0; i < u.data.size(); ++i)
        out.data[i] = std::clamp(u.data[i], lo, hi);
}

Image box_project(const Image& u, double lo, double hi) {
    Image out(u.height, u.width);
    box_project_into(u, lo, hi, out);
    return out;
}

} // namespace gradratio
