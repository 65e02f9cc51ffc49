#include "mtd/estimate.hpp"

#include <cmath>

#include "mtd/fft.hpp"
#include "mtd/invariants.hpp"
#include "mtd/parallel.hpp"

namespace mtd {

MomentAccumulator make_accumulator(int dim, int m, int n) {
  require(dim == 1 || dim == 2, ErrorCode::config, "accumulator: dim must be 1 or 2");
  require(n >= 1 && m >= 8 * n, ErrorCode::config, "accumulator: need m >= 8n");
  MomentAccumulator acc;
  acc.dim = dim;
  acc.m = m;
  acc.n = n;
  size_t nl = static_cast<size_t>(4 * n) * (4 * n);
  acc.sum_A.assign(dim == 1 ? nl : nl * nl, 0.0);
  return acc;
}

void absorb(MomentAccumulator& acc, const Micrograph& mic, int threads) {
  require(mic.dim == acc.dim && mic.m == acc.m, ErrorCode::config,
          "absorb: micrograph shape does not match accumulator");
  std::vector<double> a = acc.dim == 1 ? autocorr3_1d(mic, acc.n)
                                       : autocorr3_2d(mic, acc.n, threads);
  for (size_t i = 0; i < a.size(); ++i) acc.sum_A[i] += a[i];
  for (double px : mic.pixels) {
    acc.sum_pix += px;
    acc.sum_pix2 += px * px;
  }
  acc.pixel_count += static_cast<int64_t>(mic.pixels.size());
  ++acc.count;
}

MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b) {
  if (a.empty() && a.sum_A.empty()) return b;
  if (b.empty() && b.sum_A.empty()) return a;
  require(a.dim == b.dim && a.m == b.m && a.n == b.n, ErrorCode::config,
          "merge: accumulator shapes differ");
  MomentAccumulator out = a;
  out.count += b.count;
  for (size_t i = 0; i < out.sum_A.size(); ++i) out.sum_A[i] += b.sum_A[i];
  out.sum_pix += b.sum_pix;
  out.sum_pix2 += b.sum_pix2;
  out.pixel_count += b.pixel_count;
  return out;
}

Estimate1D debias_1d(const MomentAccumulator& acc, double sigma, double gamma) {
  require(acc.dim == 1, ErrorCode::config, "debias_1d: accumulator is not 1D");
  require(acc.count > 0, ErrorCode::config, "debias_1d: empty accumulator");
  require(gamma > 0.0, ErrorCode::config, "debias_1d: gamma must be positive");
  const int n = acc.n, L = 4 * n;
  Estimate1D est;
  est.T = acc.pixel_mean() / (2.0 * gamma);
  est.V.resize(acc.sum_A.size());
  double bias = 2.0 * gamma * est.T * sigma * sigma;
  for (int x1 = -2 * n; x1 < 2 * n; ++x1) {
    for (int x2 = -2 * n; x2 < 2 * n; ++x2) {
      double a = acc.sum_A[static_cast<size_t>(x1 + 2 * n) * L + (x2 + 2 * n)] /
                 acc.count;
      double d = (x1 == x2 ? 1.0 : 0.0) + (x1 == 0 ? 1.0 : 0.0) +
                 (x2 == 0 ? 1.0 : 0.0);
      est.V[static_cast<size_t>(x1 + 2 * n) * L + (x2 + 2 * n)] =
          (n / gamma) * (a - bias * d);
    }
  }
  return est;
}

std::vector<cd> debias_2d(const MomentAccumulator& acc, double sigma,
                          double gamma, bool sigma_from_pixels) {
  require(acc.dim == 2, ErrorCode::config, "debias_2d: accumulator is not 2D");
  require(acc.count > 0, ErrorCode::config, "debias_2d: empty accumulator");
  require(gamma > 0.0, ErrorCode::config, "debias_2d: gamma must be positive");
  const int n = acc.n, g = 4 * n;
  const size_t np = static_cast<size_t>(g) * g;
  double s2 = sigma_from_pixels ? acc.pixel_var() : sigma * sigma;
  double bias = s2 * acc.pixel_mean();

  std::vector<cd> t(np * np);
  for (size_t i1 = 0; i1 < np; ++i1) {
    int a = static_cast<int>(i1) / g - 2 * n, b = static_cast<int>(i1) % g - 2 * n;
    for (size_t i2 = 0; i2 < np; ++i2) {
      int c = static_cast<int>(i2) / g - 2 * n, d = static_cast<int>(i2) % g - 2 * n;
      double v = acc.sum_A[i1 * np + i2] / acc.count;
      double del = ((a == 0 && b == 0) ? 1.0 : 0.0) +
                   ((c == 0 && d == 0) ? 1.0 : 0.0) +
                   ((a == c && b == d) ? 1.0 : 0.0);
      t[i1 * np + i2] = v - bias * del;
    }
  }

  // 4D signed DFT as two passes of 2D transforms over each lag argument
  for (size_t i1 = 0; i1 < np; ++i1) {
    std::vector<cd> row(t.begin() + i1 * np, t.begin() + (i1 + 1) * np);
    row = fftops::dft_signed_2d(row, n);
    std::copy(row.begin(), row.end(), t.begin() + i1 * np);
  }
  std::vector<cd> col(np);
  for (size_t i2 = 0; i2 < np; ++i2) {
    for (size_t i1 = 0; i1 < np; ++i1) col[i1] = t[i1 * np + i2];
    col = fftops::dft_signed_2d(col, n);
    for (size_t i1 = 0; i1 < np; ++i1) t[i1 * np + i2] = col[i1];
  }

  double scale = 2.0 * kPi * n * n / gamma;
  for (cd& z : t) z *= scale;
  return t;
}

}  // namespace mtd
