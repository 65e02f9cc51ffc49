#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "mtd/disc_basis.hpp"
#include "mtd/types.hpp"

namespace mtd {

// ---------------------------------------------------------------------------
// 1D invariant features. Arrays over lags use the signed convention:
// index x + 2n on the {-2n,...,2n-1} grid.

// T_F = (1/2n) sum F(x).
double mean_T(const TargetSignal1D& f);

// Rotationally averaged second-order autocorrelation, length 4n.
std::vector<double> auto2_U(const TargetSignal1D& f);

// Rotationally averaged third-order autocorrelation, (4n)^2 row-major.
std::vector<double> auto3_V(const TargetSignal1D& f);

// A_M(x1,x2) = (1/m) sum_x M(x) M(x+x1 mod m) M(x+x2 mod m), cyclic.
std::vector<double> autocorr3_1d(const Micrograph& mic, int n);

// 2D third-order autocorrelation over all lag pairs in X^2 (zero-extended,
// normalized by 1/m^2), laid out as T[(i1*16n^2)+i2] with i = signed pair
// index. FFT-based: one padded cross-correlation per first lag.
std::vector<double> autocorr3_2d(const Micrograph& mic, int n, int threads = 0);

// ---------------------------------------------------------------------------
// Binning of X x X into tuples (floor(b1|k1|), floor(b1|k2|), floor(b2 theta)).
// Pairs with k1 = 0 or k2 = 0 go to dedicated bins keyed by the other
// magnitude (theta is undefined there).

struct BinMap {
  int n = 0;
  double b1 = 1.0, b2 = 0.0;
  int bin_count = 0;
  std::vector<int32_t> flat;  // (16n^2)^2 entries, bin id per (k1,k2)
  std::vector<int64_t> counts;

  int32_t bin_of(size_t i1, size_t i2) const {
    return flat[i1 * static_cast<size_t>(n) * n * 16 + i2];
  }
};

// Default b2 = 6/pi (~pi/6 angular bins) when passed 0.
BinMap bin_map(int n, double b1 = 1.0, double b2 = 0.0);

// out[T] = sum_{(k1,k2) in I_T} tensor(k1,k2).
std::vector<cd> bin_reduce(std::span<const cd> tensor, const BinMap& bins);

// ---------------------------------------------------------------------------
// Steerable forward model for the third-order invariant in the Fourier
// domain. The quadrature convention is
//   S_hat(k1,k2) = (2pi/L) * sum_j Fhat_{phi_j}(k1) Fhat_{phi_j}(k2)
//                  Fhat_{phi_j}(-k1-k2),   phi_j = 2pi j / L,
// i.e. the angular integral evaluated at the Nyquist rate L = 6N; doubling L
// leaves the value unchanged for in-basis coefficients.

struct AngularDesign {
  const DiscBasis* basis = nullptr;
  int angles = 0;
  std::vector<double> phis;

  // u_j(phi_a, k) = Psi_hat_{nu_j,q_j}(k) e^{i nu_j phi_a}.
  cd u(int coeff, int angle, size_t k) const {
    return basis->psi_hat[coeff][k] *
           std::polar(1.0, basis->indices[coeff].nu * phis[angle]);
  }
};

AngularDesign angular_design(const DiscBasis& basis, int angles = 0);

// Oracle route: render each rotation on the pixel grid, DFT it, and sum the
// triple products. Dense (16n^2)^2 output; small n only.
std::vector<cd> s_hat_truth(const CoeffVector& v, const DiscBasis& basis,
                            int angles = 0);

// Forward/gradient engine built on the u-vector formulation. Precomputes
// Fhat_{phi_j}(k) = v^T u(phi_j, k) once per coefficient vector, then streams
// over (k1,k2) pairs without materializing the tensor unless asked.
class SHatEngine {
 public:
  explicit SHatEngine(const DiscBasis& basis, int angles = 0, int threads = 0);

  void set_coeffs(const CoeffVector& v);

  const DiscBasis& basis() const { return *basis_; }
  int angles() const { return angles_; }

  // Dense tensor (k1-major), (16n^2)^2 entries.
  std::vector<cd> dense() const;
  std::vector<cd> bin_sums(const BinMap& bins) const;

  // 0.5 * sum |S_hat_v - target|^2 over all pairs. If grad is non-null it
  // receives the unconstrained complex partials dg/dv_l.
  double cost_dense(std::span<const cd> target, std::vector<cd>* grad) const;
  // 0.5 * sum_T |sum_{I_T}(S_hat_v - target)|^2.
  double cost_binned(const BinMap& bins, std::span<const cd> target_bins,
                     std::vector<cd>* grad) const;

  // d-vector gradient of S_hat_v at a single pair (tests/oracles).
  std::vector<cd> gradient_at(size_t i1, size_t i2) const;
  cd value_at(size_t i1, size_t i2) const;

 private:
  const DiscBasis* basis_;
  int angles_;
  int threads_;
  double weight_;                 // 2pi / L
  std::vector<cd> fhat_;          // [k][j] layout, 16n^2 x L
  std::vector<int> neg_sum_;      // per-axis index of wrap(-a-b)
  std::vector<cd> fold_gradient(const std::vector<cd>& dcoef) const;
};

}  // namespace mtd
