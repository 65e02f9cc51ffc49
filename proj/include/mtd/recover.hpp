#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mtd/disc_basis.hpp"
#include "mtd/invariants.hpp"
#include "mtd/types.hpp"

namespace mtd {

// ---------------------------------------------------------------------------
// 1D closed-form recovery.

// B(k1,k2) = a_{k1} a_{k2} a_{-k1-k2 mod 2n}, indices in {-n,...,n-1}.
struct Bispectrum1D {
  int n = 0;
  std::vector<cd> B;  // (2n)^2 row-major, index (k + n)*2n + (l + n)

  cd at(int k1, int k2) const {
    return B[static_cast<size_t>(k1 + n) * 2 * n + (k2 + n)];
  }
  cd& ref(int k1, int k2) {
    return B[static_cast<size_t>(k1 + n) * 2 * n + (k2 + n)];
  }
};

// DFT a_k = sum_x F(x) e^{-2 pi i k x / 2n}, k in {-n,...,n-1}.
std::vector<cd> dft_target(const TargetSignal1D& f);

// Oracle route: B directly from the DFT of F.
Bispectrum1D bispectrum_from_dft(const TargetSignal1D& f);

// B from the rotationally averaged autocorrelation: the 2D DFT of V on the
// 4n grid at even frequencies, scaled so bispectrum_from_V(auto3_V(F))
// reproduces a_{k1} a_{k2} a_{-k1-k2} exactly.
Bispectrum1D bispectrum_from_V(std::span<const double> V, int n);

// Inversion up to integer cyclic shift. Magnitudes from B(k,-k), phases by
// the B(k,1) recursion with the arg(a_1)=0 gauge, then a closing correction
// from the Nyquist entry so the gauge lands on an exact lattice shift.
// ls_phases refines the phases against all bispectrum entries (noisy input).
// Rejects when any |B(k,-k)| < 1e-9 max|B| (vanishing-DFT hypothesis) or the
// reconstruction has relative imaginary residue above 1e-6.
TargetSignal1D invert_bispectrum(const Bispectrum1D& bis, bool ls_phases = false);

// min over integer shifts tau of ||Fhat - F_tau|| / ||F||.
double align_error_1d(const TargetSignal1D& fhat, const TargetSignal1D& f);

// min over a 720-point rotation grid (locally refined) of
// ||steer(vhat,phi) - v|| / ||v||.
double align_error_2d(const CoeffVector& vhat, const CoeffVector& v,
                      const DiscBasis& basis);

// ---------------------------------------------------------------------------
// Real parameterization of the conjugate-pair constraint: independent
// coordinates are Re v for nu = 0 and (Re, Im) v for nu > 0; nu < 0 entries
// are implied by v_{(-nu,q)} = (-1)^nu conj(v_{(nu,q)}).
struct RealParam {
  struct Slot {
    int idx = 0;      // coefficient index with nu >= 0
    int partner = -1; // matching nu < 0 index, -1 when nu = 0
    double sign = 1.0;
  };
  std::vector<Slot> slots;
  int dims = 0;

  explicit RealParam(const DiscBasis& basis);
  CoeffVector unpack(std::span<const double> x) const;
  std::vector<double> pack(const CoeffVector& v) const;
  // Folds unconstrained complex partials dg/dv_l into d/dx.
  std::vector<double> fold(const std::vector<cd>& dg) const;
};

// ---------------------------------------------------------------------------
// Quasi-Newton minimization.

struct OptimizerOptions {
  int max_iters = 5000;
  double grad_tol = 1e-9;
  double init_scale = 1.0;
  int restarts = 5;
  uint64_t seed = 0;
  bool probe_gradient = true;
  // When nonnegative, restarts continue until a converged run reaches this
  // cost (guards against converged-but-spurious local minima).
  double success_cost = -1.0;
};

struct MinimizeReport {
  double cost = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
};

using CostFn =
    std::function<double(std::span<const double>, std::vector<double>*)>;
using RestartSampler = std::function<std::vector<double>(int)>;

// BFGS with a strong-Wolfe line search. On line-search failure or
// non-convergence draws a fresh start from the sampler (up to opts.restarts)
// and keeps the best point. The gradient is probed against central finite
// differences at the first start; disagreement raises the optimizer error.
MinimizeReport minimize(const CostFn& f, std::vector<double>& x,
                        const OptimizerOptions& opts,
                        const RestartSampler& sampler = nullptr);

// ---------------------------------------------------------------------------
// End-to-end 2D recovery.

struct Recovery2D {
  CoeffVector v;
  MinimizeReport report;
  double aligned_error = -1.0;  // -1 when no truth supplied
};

Recovery2D recover_2d_dense(const DiscBasis& basis, std::span<const cd> target,
                            const OptimizerOptions& opts, int angles = 0,
                            int threads = 0, const CoeffVector* truth = nullptr,
                            const CoeffVector* warm = nullptr);

Recovery2D recover_2d_binned(const DiscBasis& basis, const BinMap& bins,
                             std::span<const cd> target_bins,
                             const OptimizerOptions& opts, int angles = 0,
                             int threads = 0, const CoeffVector* truth = nullptr,
                             const CoeffVector* warm = nullptr);

}  // namespace mtd
