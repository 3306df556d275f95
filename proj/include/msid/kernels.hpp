#pragma once

#include <cstddef>

#include "msid/linalg.hpp"
#include "msid/multiscale.hpp"
#include "msid/var.hpp"

/// Data-parallel inner loops of the empirical estimator. The top-level
/// functions use OpenMP; `serial` holds straightforward references that the
/// tests and msid_bench compare against.
namespace msid::kernels {

/// Gram matrix of the stacked lag vector x_n = [y_n; y_{n-1}; ...; y_{n-L}]
/// summed over n = L .. N-1, where L = max_lag. Entry (r*M + a, s*M + b) is
/// sum_n y_a[n-r] y_b[n-s]. Size M(L+1) square. Requires N > L.
///
/// Only the first block row is summed over the data. The remaining blocks
/// follow by sliding the window one sample along each diagonal. Partial sums
/// use fixed-size chunks reduced in chunk order, so the result does not
/// depend on the thread count.
[[nodiscard]] Matrix lagged_gram(const SeriesData& y, std::size_t max_lag);

/// Window means of `tau` samples: sliding (length N - tau + 1) for AVG,
/// non-overlapping (length floor(N / tau)) for DWS.
[[nodiscard]] SeriesData coarse_grain(const SeriesData& y, int tau, Mode mode);

namespace serial {

/// Accumulates x_n x_n^T directly. O(N (M(L+1))^2).
[[nodiscard]] Matrix lagged_gram(const SeriesData& y, std::size_t max_lag);

[[nodiscard]] SeriesData coarse_grain(const SeriesData& y, int tau, Mode mode);

}  // namespace serial
}  // namespace msid::kernels
