#include "msid/kernels.hpp"

#include <algorithm>
#include <vector>

#include <fmt/format.h>

#include "msid/error.hpp"

namespace msid::kernels {

namespace {

constexpr long kChunk = 4096;

// sum_{n in [begin, end)} x[n] * y[n - shift], four independent accumulators
// so the loop vectorizes without reassociation flags.
double shifted_dot(const double* x, const double* y, long begin, long end, long shift) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  const double* ys = y - shift;
  long n = begin;
  for (; n + 4 <= end; n += 4) {
    acc0 += x[n] * ys[n];
    acc1 += x[n + 1] * ys[n + 1];
    acc2 += x[n + 2] * ys[n + 2];
    acc3 += x[n + 3] * ys[n + 3];
  }
  for (; n < end; ++n) acc0 += x[n] * ys[n];
  return (acc0 + acc1) + (acc2 + acc3);
}

}  // namespace

Matrix lagged_gram(const SeriesData& y, std::size_t max_lag) {
  const long m = y.rows();
  const long n = y.cols();
  const auto lags = static_cast<long>(max_lag);
  if (n <= lags) {
    fail(ErrorKind::length, fmt::format("series of {} samples is too short for {} lags", n, lags));
  }

  // base[(a*m + b)*(L+1) + s] = sum_{n=L}^{N-1} y_a[n] y_b[n-s]
  const long width = lags + 1;
  const long pairs = m * m;
  const long chunks = (n - lags + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks * pairs * width));

#pragma omp parallel for schedule(static)
  for (long c = 0; c < chunks; ++c) {
    const long begin = lags + c * kChunk;
    const long end = std::min(n, begin + kChunk);
    double* out = partial.data() + c * pairs * width;
    for (long a = 0; a < m; ++a) {
      const double* ya = y.row(a).data();
      for (long b = 0; b < m; ++b) {
        const double* yb = y.row(b).data();
        for (long s = 0; s <= lags; ++s) {
          out[(a * m + b) * width + s] = shifted_dot(ya, yb, begin, end, s);
        }
      }
    }
  }

  std::vector<double> base(static_cast<std::size_t>(pairs * width), 0.0);
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < pairs * width; ++idx) {
    double sum = 0.0;
    for (long c = 0; c < chunks; ++c) sum += partial[static_cast<std::size_t>(c * pairs * width + idx)];
    base[static_cast<std::size_t>(idx)] = sum;
  }

  // Walk each diagonal: G(r+1, s+1) = G(r, s) + y_a[L-1-r] y_b[L-1-s]
  //                                          - y_a[N-1-r] y_b[N-1-s].
  const long dim = m * width;
  Matrix gram(dim, dim);
#pragma omp parallel for collapse(2) schedule(static)
  for (long a = 0; a < m; ++a) {
    for (long b = 0; b < m; ++b) {
      const double* ya = y.row(a).data();
      const double* yb = y.row(b).data();
      for (long d = 0; d <= lags; ++d) {
        if (d == 0 && a > b) continue;  // mirrored by the (b, a) pair
        double value = base[static_cast<std::size_t>((a * m + b) * width + d)];
        for (long r = 0; r + d <= lags; ++r) {
          const long s = r + d;
          gram(r * m + a, s * m + b) = value;
          gram(s * m + b, r * m + a) = value;
          if (s < lags) {
            value += ya[lags - 1 - r] * yb[lags - 1 - s] - ya[n - 1 - r] * yb[n - 1 - s];
          }
        }
      }
    }
  }
  return gram;
}

SeriesData coarse_grain(const SeriesData& y, int tau, Mode mode) {
  if (tau < 1) fail(ErrorKind::parameter, fmt::format("scale factor must be >= 1, got {}", tau));
  const long n = y.cols();
  if (n < tau) {
    fail(ErrorKind::length, fmt::format("series of {} samples is shorter than tau = {}", n, tau));
  }
  const long m = y.rows();
  const long out_len = mode == Mode::avg ? n - tau + 1 : n / tau;
  const long stride = mode == Mode::avg ? 1 : tau;
  SeriesData out(m, out_len);
#pragma omp parallel for collapse(2) schedule(static)
  for (long c = 0; c < m; ++c) {
    for (long i = 0; i < out_len; ++i) {
      const double* src = y.row(c).data() + i * stride;
      double sum = 0.0;
      for (long l = 0; l < tau; ++l) sum += src[l];
      out(c, i) = sum / tau;
    }
  }
  return out;
}

}  // namespace msid::kernels
