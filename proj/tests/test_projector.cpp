#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gradratio/cg.hpp"
#include "gradratio/grid_ops.hpp"
#include "gradratio/phantom.hpp"
#include "gradratio/projector.hpp"
#include "gradratio/rng.hpp"
#include "oracles.hpp"

using namespace gradratio;

namespace {

constexpr double kPi = 3.14159265358979323846;

Image random_image(int m, int n, std::uint64_t seed) {
    Image u(m, n);
    Rng rng(seed);
    for (double& v : u.data) v = rng.next_double();
    return u;
}

Geometry parallel_geom(int n, double theta_max, int angles = 31,
                       int detectors = 0) {
    Geometry g;
    g.kind = BeamKind::parallel;
    g.grid_size = n;
    g.theta_max_deg = theta_max;
    g.angle_count = angles;
    g.detector_count = detectors;
    return g;
}

Geometry fan_geom(int n, double theta_max, int angles = 31) {
    Geometry g;
    g.kind = BeamKind::fan;
    g.grid_size = n;
    g.theta_max_deg = theta_max;
    g.angle_count = angles;
    return g;
}

// Recomputes ray origin and unit direction from the documented geometry
// conventions (independently of the Siddon traversal).
struct RayDef {
    double px, py, dx, dy;
};

RayDef parallel_ray(const Geometry& g, int detector, int angle_idx) {
    const double n = g.grid_size;
    const double theta = angle_idx * (g.theta_max_deg / g.angle_count) * kPi / 180.0;
    const double spacing = std::sqrt(2.0) * n / g.detector_count;
    const double s = (detector - 0.5 * (g.detector_count - 1)) * spacing;
    return {0.5 * n + s * std::cos(theta), 0.5 * n + s * std::sin(theta),
            -std::sin(theta), std::cos(theta)};
}

RayDef fan_ray(const Geometry& g, int detector, int angle_idx) {
    const double n = g.grid_size;
    const double theta = angle_idx * (g.theta_max_deg / g.angle_count) * kPi / 180.0;
    const double cx = -std::sin(theta), cy = std::cos(theta);
    const double fan = 2.0 * std::asin((n / std::sqrt(2.0)) / g.source_radius);
    const double gamma =
        (detector - 0.5 * (g.detector_count - 1)) * (fan / g.detector_count);
    const double gc = std::cos(gamma), gs = std::sin(gamma);
    return {0.5 * n - g.source_radius * cx, 0.5 * n - g.source_radius * cy,
            cx * gc - cy * gs, cx * gs + cy * gc};
}

} // namespace

TEST_SUITE_BEGIN("projector");

TEST_CASE("default sampling at N=256 gives the 362x31 data size") {
    const Geometry g = resolve_geometry(parallel_geom(256, 150.0));
    CHECK(g.detector_count == 362);
    CHECK(g.angle_count == 31);
    const SparseProjector A = build_projector(parallel_geom(256, 150.0));
    CHECK(A.rows == 362u * 31u);
    CHECK(A.cols == 256u * 256u);
}

TEST_CASE("single ray through a single-pixel grid") {
    Geometry g = parallel_geom(1, 90.0, 1, 1);
    const SparseProjector A = build_projector(g);
    REQUIRE(A.nnz() == 1);
    CHECK(A.col[0] == 0);
    // angle 0: a vertical ray through the cell center, chord length 1
    CHECK(A.val[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("row sums match the analytic line-clipping oracle") {
    for (bool fan : {false, true}) {
        Geometry g0 = fan ? fan_geom(16, 150.0, 7) : parallel_geom(16, 150.0, 7);
        const Geometry g = resolve_geometry(g0);
        const SparseProjector A = build_projector(g0);
        const Sinogram sums = forward(A, Image(16, 16, 1.0));
        for (int i = 0; i < g.detector_count; ++i)
            for (int t = 0; t < g.angle_count; ++t) {
                const RayDef r = fan ? fan_ray(g, i, t) : parallel_ray(g, i, t);
                const double expect =
                    oracles::line_box_length(r.px, r.py, r.dx, r.dy, 16.0);
                const double got = sums.data[static_cast<std::size_t>(i) *
                                                 g.angle_count + t];
                CHECK(std::abs(got - expect) <= 1e-10);
            }
    }
}

TEST_CASE("weights are positive, at most a cell diagonal, and unique per row") {
    const SparseProjector A = build_projector(parallel_geom(16, 150.0));
    for (double w : A.val) {
        CHECK(w > 0.0);
        CHECK(w <= std::sqrt(2.0) + 1e-12);
    }
    for (std::size_t r = 0; r < A.rows; ++r) {
        std::vector<std::uint32_t> cols(A.col.begin() + A.row_ptr[r],
                                        A.col.begin() + A.row_ptr[r + 1]);
        std::sort(cols.begin(), cols.end());
        CHECK(std::adjacent_find(cols.begin(), cols.end()) == cols.end());
    }
}

TEST_CASE("forward: zero image, delta image, dense oracle") {
    const SparseProjector A = build_projector(parallel_geom(16, 150.0, 9));

    const Sinogram zero = forward(A, Image(16, 16));
    for (double v : zero.data) CHECK(v == 0.0);

    Image delta(16, 16);
    delta.at(7, 3) = 1.0;
    const Sinogram col = forward(A, delta);
    const auto dense = oracles::dense_from_projector(A);
    for (std::size_t r = 0; r < A.rows; ++r)
        CHECK(col.data[r] == doctest::Approx(dense[r][7 * 16 + 3]).epsilon(1e-15));

    const Image u = random_image(16, 16, 5);
    const Sinogram f = forward(A, u);
    const auto expect = oracles::dense_matvec(dense, u.data);
    for (std::size_t r = 0; r < A.rows; ++r)
        CHECK(std::abs(f.data[r] - expect[r]) <=
              1e-12 * std::max(1.0, std::abs(expect[r])));
}

TEST_CASE("adjoint: zero, one-hot, dense oracle") {
    const SparseProjector A = build_projector(parallel_geom(16, 150.0, 9));

    Sinogram zero(A.geometry.detector_count, A.geometry.angle_count);
    const Image z = adjoint(A, zero);
    for (double v : z.data) CHECK(v == 0.0);

    Sinogram hot(A.geometry.detector_count, A.geometry.angle_count);
    hot.data[37] = 1.0;
    const Image row = adjoint(A, hot);
    const auto dense = oracles::dense_from_projector(A);
    for (std::size_t c = 0; c < A.cols; ++c)
        CHECK(row.data[c] == doctest::Approx(dense[37][c]).epsilon(1e-15));

    Sinogram r(A.geometry.detector_count, A.geometry.angle_count);
    Rng rng(77);
    for (double& v : r.data) v = 2.0 * rng.next_double() - 1.0;
    const Image bp = adjoint(A, r);
    const auto expect = oracles::dense_matvec_t(dense, r.data);
    for (std::size_t c = 0; c < A.cols; ++c)
        CHECK(std::abs(bp.data[c] - expect[c]) <=
              1e-12 * std::max(1.0, std::abs(expect[c])));
}

TEST_CASE("forward/adjoint inner-product identity") {
    for (bool fan : {false, true}) {
        const SparseProjector A = build_projector(
            fan ? fan_geom(16, 120.0, 11) : parallel_geom(16, 120.0, 11));
        for (int trial = 0; trial < 50; ++trial) {
            const Image u = random_image(16, 16, 1000 + trial);
            Sinogram r(A.geometry.detector_count, A.geometry.angle_count);
            Rng rng(2000 + trial);
            for (double& v : r.data) v = 2.0 * rng.next_double() - 1.0;
            double lhs = 0.0;
            const Sinogram au = forward(A, u);
            for (std::size_t i = 0; i < r.data.size(); ++i)
                lhs += au.data[i] * r.data[i];
            const double rhs = dot(u, adjoint(A, r));
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("assumption check: A^T A + div^T grad is positive definite") {
    // Inverse power iteration via CG on small grids with at least two
    // angles; the smallest eigenvalue must stay strictly positive.
    for (int n : {8, 16}) {
        const SparseProjector A = build_projector(parallel_geom(n, 90.0, 2));
        Sinogram scratch(A.geometry.detector_count, A.geometry.angle_count);
        GradientField g(n, n);
        Image tmp(n, n);
        const LinearOp op = [&](const Image& in, Image& out) {
            forward_into(A, in, scratch);
            adjoint_into(A, scratch, out);
            gradient_into(in, g);
            divergence_adjoint_into(g, tmp);
            for (std::size_t i = 0; i < out.data.size(); ++i)
                out.data[i] += tmp.data[i];
        };
        Image x = random_image(n, n, 3 * n);
        double lambda_min = 0.0;
        for (int it = 0; it < 30; ++it) {
            const CgResult sol = cg_solve(op, x, Image(n, n), 1e-10, 2000);
            const double nn = norms(sol.x).l2;
            REQUIRE(nn > 0.0);
            for (std::size_t i = 0; i < x.data.size(); ++i)
                x.data[i] = sol.x.data[i] / nn;
        }
        Image mx(n, n);
        op(x, mx);
        lambda_min = dot(x, mx) / dot(x, x);
        CHECK(lambda_min > 1e-8);
    }
}

TEST_CASE("rotating the phantom by 90 degrees permutes parallel angles") {
    const int n = 32;
    Image u = shepp_logan(n, PhantomVariant::high_contrast);
    // counterclockwise quarter turn
    Image rot(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) rot.at(r, c) = u.at(c, n - 1 - r);

    const SparseProjector A = build_projector(parallel_geom(n, 180.0, 2));
    const Sinogram fu = forward(A, u);
    const Sinogram fr = forward(A, rot);
    const int p = A.geometry.detector_count;

    // angle index 1 is 90 degrees; compare against angle 0 of the rotated
    // image, allowing either detector orientation.
    double direct = 0.0, flipped = 0.0;
    for (int i = 0; i < p; ++i) {
        const double a = fu.data[static_cast<std::size_t>(i) * 2 + 1];
        const double b = fr.data[static_cast<std::size_t>(i) * 2 + 0];
        const double bf = fr.data[static_cast<std::size_t>(p - 1 - i) * 2 + 0];
        direct = std::max(direct, std::abs(a - b));
        flipped = std::max(flipped, std::abs(a - bf));
    }
    CHECK(std::min(direct, flipped) <= 1e-10);
}

TEST_CASE("degenerate geometries are rejected") {
    CHECK_THROWS_AS(build_projector(parallel_geom(0, 90.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_projector(parallel_geom(16, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_projector(parallel_geom(16, 200.0)),
                    std::invalid_argument); // parallel caps at 180
    Geometry g = fan_geom(16, 400.0);
    CHECK_THROWS_AS(build_projector(g), std::invalid_argument);
    Geometry inside = fan_geom(16, 150.0);
    inside.source_radius = 5.0; // inside the grid half-diagonal
    CHECK_THROWS_AS(build_projector(inside), std::invalid_argument);
    Geometry zero_angles = parallel_geom(16, 90.0, 0);
    CHECK_THROWS_AS(build_projector(zero_angles), std::invalid_argument);
}

TEST_CASE("shape mismatches are rejected") {
    const SparseProjector A = build_projector(parallel_geom(16, 150.0, 5));
    CHECK_THROWS_AS(forward(A, Image(8, 8)), std::invalid_argument);
    CHECK_THROWS_AS(adjoint(A, Sinogram(3, 3)), std::invalid_argument);
}

TEST_SUITE_END();
