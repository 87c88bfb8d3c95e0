#pragma once

namespace gradratio {

/// Worker count used by the parallel kernels (sparse matrix-vector
/// products). Defaults to the hardware concurrency; the environment
/// variable GRADRATIO_THREADS caps it. Read once, cached.
int thread_count();

} // namespace gradratio
