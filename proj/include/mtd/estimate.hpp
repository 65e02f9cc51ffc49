#pragma once

#include <vector>

#include "mtd/types.hpp"

namespace mtd {

// Streaming sums over micrographs. 1D accumulators hold the cyclic A_M sum
// (periodic separation convention); 2D accumulators the zero-extended one.
struct MomentAccumulator {
  int dim = 0, m = 0, n = 0;
  int64_t count = 0;
  std::vector<double> sum_A;
  double sum_pix = 0.0, sum_pix2 = 0.0;
  int64_t pixel_count = 0;

  bool empty() const { return count == 0; }
  double pixel_mean() const { return pixel_count ? sum_pix / pixel_count : 0.0; }
  double pixel_var() const {
    if (!pixel_count) return 0.0;
    double mu = pixel_mean();
    return sum_pix2 / pixel_count - mu * mu;
  }
};

MomentAccumulator make_accumulator(int dim, int m, int n);

void absorb(MomentAccumulator& acc, const Micrograph& mic, int threads = 0);

MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b);

struct Estimate1D {
  std::vector<double> V;  // (4n)^2 signed lag grid
  double T = 0.0;
};

// V_hat = (n/gamma)(Abar - 2 gamma T_hat sigma^2 (delta terms)),
// T_hat = mean(M) / (2 gamma).
Estimate1D debias_1d(const MomentAccumulator& acc, double sigma, double gamma);

// Fourier-domain third-order estimate: removes the three sigma^2 * mean(M)
// delta lines in lag space, then S_hat = (2 pi n^2 / gamma) * DFT4(Abar).
// sigma_from_pixels replaces sigma^2 by the accumulated pixel variance
// (low-SNR regime only).
std::vector<cd> debias_2d(const MomentAccumulator& acc, double sigma,
                          double gamma, bool sigma_from_pixels = false);

}  // namespace mtd
