#include "gradratio/projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gradratio/parallel.hpp"

namespace gradratio {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDirEps = 1e-12;   // direction component treated as axis-parallel
constexpr double kChordEps = 1e-12; // grazing segments below this are dropped

struct Ray {
    double px, py; // a point on the ray
    double dx, dy; // unit direction
};

// Accumulates one matrix row: cells in traversal order.
void trace_ray(const Ray& ray, int n, std::vector<std::uint32_t>& cols,
               std::vector<double>& weights) {
    const double N = static_cast<double>(n);

    // Clip the parametric line against [0,N]^2 (slab method).
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    const double p[2] = {ray.px, ray.py};
    const double d[2] = {ray.dx, ray.dy};
    for (int a = 0; a < 2; ++a) {
        if (std::abs(d[a]) > kDirEps) {
            double t0 = (0.0 - p[a]) / d[a];
            double t1 = (N - p[a]) / d[a];
            if (t0 > t1) std::swap(t0, t1);
            tmin = std::max(tmin, t0);
            tmax = std::min(tmax, t1);
        } else if (p[a] < 0.0 || p[a] > N) {
            return; // parallel to this slab and outside it
        }
    }
    if (!(tmax - tmin > kChordEps)) return;

    auto entry_cell = [n](double w, double dw) {
        int i = static_cast<int>(std::floor(w));
        if (static_cast<double>(i) == w && dw < 0.0) --i;
        return std::clamp(i, 0, n - 1);
    };
    int ix = entry_cell(ray.px + tmin * ray.dx, ray.dx);
    int iy = entry_cell(ray.py + tmin * ray.dy, ray.dy);

    const int sx = ray.dx > kDirEps ? 1 : (ray.dx < -kDirEps ? -1 : 0);
    const int sy = ray.dy > kDirEps ? 1 : (ray.dy < -kDirEps ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();

    auto boundary_t = [](double p0, double d0, double b) {
        return (b - p0) / d0;
    };
    double tx = sx != 0 ? boundary_t(ray.px, ray.dx, ix + (sx > 0 ? 1.0 : 0.0))
                        : inf;
    double ty = sy != 0 ? boundary_t(ray.py, ray.dy, iy + (sy > 0 ? 1.0 : 0.0))
                        : inf;
    const double dtx = sx != 0 ? 1.0 / std::abs(ray.dx) : inf;
    const double dty = sy != 0 ? 1.0 / std::abs(ray.dy) : inf;

    double t = tmin;
    while (t < tmax - kChordEps) {
        const double tn = std::min({tx, ty, tmax});
        const double w = tn - t;
        if (w > kChordEps) {
            cols.push_back(static_cast<std::uint32_t>(iy) * n + ix);
            weights.push_back(w);
        }
        if (tn >= tmax) break;
        // On an exact corner hit, step both axes so no cell repeats.
        const bool step_x = sx != 0 && tx <= ty;
        const bool step_y = sy != 0 && ty <= tx;
        if (step_x) {
            ix += sx;
            tx += dtx;
            if (ix < 0 || ix >= n) break;
        }
        if (step_y) {
            iy += sy;
            ty += dty;
            if (iy < 0 || iy >= n) break;
        }
        t = tn;
    }
}

Ray make_parallel_ray(const Geometry& g, int detector, double theta_rad) {
    const double n = static_cast<double>(g.grid_size);
    const double spacing = std::sqrt(2.0) * n / g.detector_count;
    const double s = (detector - 0.5 * (g.detector_count - 1)) * spacing;
    const double cs = std::cos(theta_rad), sn = std::sin(theta_rad);
    Ray r;
    r.px = 0.5 * n + s * cs;
    r.py = 0.5 * n + s * sn;
    r.dx = -sn;
    r.dy = cs;
    return r;
}

Ray make_fan_ray(const Geometry& g, int detector, double theta_rad) {
    const double n = static_cast<double>(g.grid_size);
    const double cs = std::cos(theta_rad), sn = std::sin(theta_rad);
    // Central direction matches the parallel-beam convention; source sits
    // source_radius behind the grid center along that direction.
    const double cx = -sn, cy = cs;
    const double half_diag = n / std::sqrt(2.0);
    const double full_fan =
        2.0 * std::asin(std::min(1.0, half_diag / g.source_radius));
    const double gamma =
        (detector - 0.5 * (g.detector_count - 1)) * (full_fan / g.detector_count);
    const double gc = std::cos(gamma), gs = std::sin(gamma);
    Ray r;
    r.px = 0.5 * n - g.source_radius * cx;
    r.py = 0.5 * n - g.source_radius * cy;
    r.dx = cx * gc - cy * gs;
    r.dy = cx * gs + cy * gc;
    return r;
}

} // namespace

Geometry resolve_geometry(const Geometry& g) {
    Geometry out = g;
    if (out.grid_size < 1)
        throw std::invalid_argument("geometry: grid_size must be positive");
    if (out.angle_count < 1)
        throw std::invalid_argument("geometry: angle_count must be >= 1");
    if (out.detector_count == 0)
        out.detector_count = static_cast<int>(
            std::llround(std::sqrt(2.0) * out.grid_size));
    if (out.detector_count < 1)
        throw std::invalid_argument("geometry: detector_count must be >= 1");
    const double cap = out.kind == BeamKind::parallel ? 180.0 : 360.0;
    if (!(out.theta_max_deg > 0.0) || out.theta_max_deg > cap)
        throw std::invalid_argument("geometry: theta_max out of range");
    if (out.kind == BeamKind::fan) {
        if (out.source_radius == 0.0) out.source_radius = 2.0 * out.grid_size;
        if (out.detector_radius == 0.0) out.detector_radius = out.source_radius;
        const double half_diag = out.grid_size / std::sqrt(2.0);
        if (!(out.source_radius > half_diag))
            throw std::invalid_argument(
                "geometry: fan source_radius must exceed the grid half-diagonal");
        if (!(out.detector_radius > 0.0))
            throw std::invalid_argument("geometry: detector_radius must be positive");
    }
    return out;
}

SparseProjector build_projector(const Geometry& geom) {
    const Geometry g = resolve_geometry(geom);
    const int n = g.grid_size;
    const int p = g.detector_count;
    const int na = g.angle_count;

    SparseProjector A;
    A.geometry = g;
    A.rows = static_cast<std::size_t>(p) * na;
    A.cols = static_cast<std::size_t>(n) * n;
    A.row_ptr.assign(A.rows + 1, 0);

    const double dtheta = g.theta_max_deg / na * kPi / 180.0;

    std::vector<std::uint32_t> cols;
    std::vector<double> weights;
    for (int i = 0; i < p; ++i) {
        for (int t = 0; t < na; ++t) {
            cols.clear();
            weights.clear();
            const double theta = t * dtheta;
            const Ray ray = g.kind == BeamKind::parallel
                                ? make_parallel_ray(g, i, theta)
                                : make_fan_ray(g, i, theta);
            trace_ray(ray, n, cols, weights);
            const std::size_t row = static_cast<std::size_t>(i) * na + t;
            A.row_ptr[row + 1] = cols.size();
            A.col.insert(A.col.end(), cols.begin(), cols.end());
            A.val.insert(A.val.end(), weights.begin(), weights.end());
        }
    }
    for (std::size_t r = 0; r < A.rows; ++r) A.row_ptr[r + 1] += A.row_ptr[r];

    build_transpose_index(A);
    return A;
}

void build_transpose_index(SparseProjector& A) {
    A.col_ptr.assign(A.cols + 1, 0);
    for (std::uint32_t c : A.col) ++A.col_ptr[c + 1];
    for (std::size_t c = 0; c < A.cols; ++c) A.col_ptr[c + 1] += A.col_ptr[c];

    A.row_idx.assign(A.nnz(), 0);
    A.val_csc.assign(A.nnz(), 0.0);
    std::vector<std::size_t> next(A.col_ptr.begin(), A.col_ptr.end() - 1);
    for (std::size_t r = 0; r < A.rows; ++r) {
        for (std::size_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) {
            const std::size_t dst = next[A.col[k]]++;
            A.row_idx[dst] = static_cast<std::uint32_t>(r);
            A.val_csc[dst] = A.val[k];
        }
    }
}

void forward_into(const SparseProjector& A, const Image& u, Sinogram& out) {
    if (u.size() != A.cols)
        throw std::invalid_argument("forward: image size does not match matrix");
    if (out.size() != A.rows)
        throw std::invalid_argument("forward: sinogram size does not match matrix");
    const double* x = u.data.data();
    double* y = out.data.data();
    const std::int64_t rows = static_cast<std::int64_t>(A.rows);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::int64_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
            s += A.val[k] * x[A.col[k]];
        y[r] = s;
    }
}

Sinogram forward(const SparseProjector& A, const Image& u) {
    Sinogram f;
    if (A.geometry.detector_count > 0 && A.geometry.angle_count > 0 &&
        static_cast<std::size_t>(A.geometry.detector_count) *
                A.geometry.angle_count == A.rows) {
        f = Sinogram(A.geometry.detector_count, A.geometry.angle_count);
        f.geometry = A.geometry;
    } else {
        f = Sinogram(static_cast<int>(A.rows), 1);
    }
    forward_into(A, u, f);
    return f;
}

void adjoint_into(const SparseProjector& A, const Sinogram& r, Image& out) {
    if (r.size() != A.rows)
        throw std::invalid_argument("adjoint: sinogram size does not match matrix");
    if (out.size() != A.cols)
        throw std::invalid_argument("adjoint: image size does not match matrix");
    const double* y = r.data.data();
    double* x = out.data.data();
    const std::int64_t cols = static_cast<std::int64_t>(A.cols);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::int64_t c = 0; c < cols; ++c) {
        double s = 0.0;
        for (std::size_t k = A.col_ptr[c]; k < A.col_ptr[c + 1]; ++k)
            s += A.val_csc[k] * y[A.row_idx[k]];
        x[c] = s;
    }
}

Image adjoint(const SparseProjector& A, const Sinogram& r) {
    const int side = static_cast<int>(std::llround(std::sqrt(
        static_cast<double>(A.cols))));
    Image u;
    if (static_cast<std::size_t>(side) * side == A.cols)
        u = Image(side, side);
    else
        u = Image(1, static_cast<int>(A.cols));
    adjoint_into(A, r, u);
    return u;
}

} // namespace gradratio
