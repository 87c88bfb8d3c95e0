#pragma once

#include <string>

#include "gradratio/errors.hpp"
#include "gradratio/projector.hpp"
#include "gradratio/solvers.hpp"
#include "gradratio/types.hpp"

namespace gradratio {

/// On-disk formats. All writers are atomic (write to a temporary in the
/// same directory, then rename), so interrupted runs never leave
/// truncated artifacts. Binary payloads are little-endian.
///
///   images/sinograms:  "IMGF64 v1 <rows> <cols>\n" + row-major f64
///   sparse matrices:   "SPARSEPROJ v1 <rows> <cols> <nnz>\n"
///                      + nnz triplets of (u64 row, u64 col, f64 weight)

void write_image(const Image& img, const std::string& path);
Image read_image(const std::string& path);

void write_sinogram(const Sinogram& f, const std::string& path);
Sinogram read_sinogram(const std::string& path);

void write_projector(const SparseProjector& A, const std::string& path);
/// Rebuilds CSR (grouping rows stably, preserving intra-row order) plus
/// the transpose index.
SparseProjector read_projector(const std::string& path);

/// Per-iteration diagnostics as CSV with columns
/// iter,objective,lagrangian,rel_change,h_norm[,rmse],seconds.
void write_trace_csv(const ConvergenceTrace& trace, const std::string& path);

/// 16-bit binary PGM with the given display window.
void write_pgm16(const Image& img, const std::string& path, double window_lo,
                 double window_hi);

} // namespace gradratio
