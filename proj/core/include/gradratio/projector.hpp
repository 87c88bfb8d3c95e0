#pragma once

#include <cstdint>
#include <vector>

#include "gradratio/types.hpp"

namespace gradratio {

enum class BeamKind { parallel, fan };

/// Scanning geometry. Lengths are in pixel units (the image occupies the
/// square [0,N]^2 with unit cells). Zero-valued optional fields resolve
/// to defaults: detector_count = round(sqrt(2)*N), which covers the grid
/// diagonal, and source_radius = detector_radius = 2*N for fan beam.
struct Geometry {
    BeamKind kind = BeamKind::parallel;
    int grid_size = 0;       // N; image is N x N
    int detector_count = 0;  // 0 -> default
    int angle_count = 31;
    double theta_max_deg = 180.0; // angles sample [0, theta_max)
    double source_radius = 0.0;   // fan only; 0 -> default
    double detector_radius = 0.0; // fan only; metadata, 0 -> source_radius
};

/// Fills defaults and validates; throws std::invalid_argument on a
/// degenerate geometry.
Geometry resolve_geometry(const Geometry& g);

/// Sparse system matrix A  (rows = detector_count*angle_count, cols = N^2)
/// with exact ray/pixel chord lengths as weights. Stored in CSR plus a
/// CSC copy so the adjoint runs column-parallel with a fixed
/// (row-ascending) summation order.
struct SparseProjector {
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::vector<std::size_t> row_ptr; // rows+1
    std::vector<std::uint32_t> col;   // nnz, in ray-traversal order per row
    std::vector<double> val;

    std::vector<std::size_t> col_ptr; // cols+1
    std::vector<std::uint32_t> row_idx;
    std::vector<double> val_csc;

    Geometry geometry; // as built; zero grid_size when imported

    std::size_t nnz() const { return val.size(); }
};

/// Measurement array f, detector-major: entry (detector i, angle t) lives
/// at data[i*angles + t], matching row i*angles + t of the matrix.
struct Sinogram {
    int detectors = 0;
    int angles = 0;
    std::vector<double> data;
    Geometry geometry;

    Sinogram() = default;
    Sinogram(int d, int a, double fill = 0.0)
        : detectors(d), angles(a),
          data(static_cast<std::size_t>(d) * a, fill) {}

    std::size_t size() const { return data.size(); }
    bool same_shape(const Sinogram& o) const {
        return detectors == o.detectors && angles == o.angles;
    }
};

/// Builds the matrix row by row with a Siddon grid traversal: one row per
/// (detector bin, angle) pair, weights equal to the chord length of the
/// ray within each pixel.
SparseProjector build_projector(const Geometry& geom);

/// f = A u. Throws std::invalid_argument on shape mismatch.
Sinogram forward(const SparseProjector& A, const Image& u);
void forward_into(const SparseProjector& A, const Image& u, Sinogram& out);

/// A^T r; exact transpose of `forward`.
Image adjoint(const SparseProjector& A, const Sinogram& r);
void adjoint_into(const SparseProjector& A, const Sinogram& r, Image& out);

/// Assembles the CSC arrays from the CSR ones (used after imports).
void build_transpose_index(SparseProjector& A);

} // namespace gradratio
