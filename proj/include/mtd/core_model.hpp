#pragma once

#include <random>
#include <utility>

#include "mtd/types.hpp"

namespace mtd {

struct DiscBasis;
struct CoeffVector;

// Cyclic rotation of the support: out(x) = F((x + tau) mod 2n) for
// x in {-n,...,n-1}, zero outside. tau must lie in {-n,...,n-1}.
TargetSignal1D rotate1d(const TargetSignal1D& f, int tau);

// Rejection-sampled positions with pairwise separation >= 4n.
// 1D positions lie in {n+1,...,m-n+1} and also satisfy the periodic
// separation m - |dx| > 4n; 2D positions lie in {n+1,...,m-n}^2 with
// Euclidean separation. Throws ErrorCode::placement when the attempt
// budget (1000*p draws) is exhausted.
std::vector<int> place_targets_1d(const MeasurementConfig& cfg, std::mt19937_64& rng);
std::vector<std::pair<int, int>> place_targets_2d(const MeasurementConfig& cfg,
                                                  std::mt19937_64& rng);

// M(x) = sum_j F_{tau_j}(x - x_j) + eps(x); deterministic given (cfg, index).
std::pair<Micrograph, Placement1D> synthesize_1d(const MeasurementConfig& cfg,
                                                 const TargetSignal1D& f,
                                                 uint64_t index = 0);

// 2D analogue: copies are steered renders of the coefficient vector v.
std::pair<Micrograph, Placement2D> synthesize_2d(const MeasurementConfig& cfg,
                                                 const CoeffVector& v,
                                                 const DiscBasis& basis,
                                                 uint64_t index = 0);

// SNR per the 1D convention: (2n)^{-1} sum F(x)^2 / sigma^2.
double snr_1d(const TargetSignal1D& f, double sigma);
// SNR per the 2D convention: (pi n^2 sigma^2)^{-1} sum_x F(x)^2, where the
// sum runs over the rendered pixel grid.
double snr_2d(const std::vector<double>& grid, int n, double sigma);

double sigma_for_snr_1d(const TargetSignal1D& f, double snr);
double sigma_for_snr_2d(const std::vector<double>& grid, int n, double snr);

}  // namespace mtd
