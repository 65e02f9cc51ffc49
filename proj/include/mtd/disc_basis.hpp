#pragma once

#include <random>
#include <vector>

#include "mtd/common.hpp"

namespace mtd {

struct BasisIndex {
  int nu = 0;        // signed angular order
  int q = 0;         // radial index (1-based)
  double lambda = 0; // q-th positive root of J_|nu|
};

// Dirichlet-Laplacian eigenbasis on the unit disc, discretized on the signed
// 4n x 4n grid (index i = (x0+2n)*4n + (x1+2n)). Columns are zero for
// |x| >= n and scaled to unit discrete l2 norm; raw_norm stores the scale so
// coefficients can be mapped back to the analytic convention
// psi_{nu,q}(r,theta) = J_nu(lambda_{|nu|,q} r) e^{i nu theta}, with
// J_{-nu} = (-1)^nu J_nu for negative orders.
struct DiscBasis {
  int n = 0;
  double bandlimit = 0.0;  // max lambda admitted
  int N = 0;               // max |nu|
  int d = 0;               // |V|
  std::vector<BasisIndex> indices;
  std::vector<std::vector<cd>> psi;      // d columns of length 16n^2
  std::vector<std::vector<cd>> psi_hat;  // 4n-grid DFTs of the columns
  std::vector<double> raw_norm;          // psi = raw / raw_norm

  int grid() const { return 4 * n; }
  size_t npix() const { return static_cast<size_t>(grid()) * grid(); }
  int angle_count() const { return N > 0 ? 6 * N : 6; }
};

// Expansion coefficients aligned to basis.indices. A real rendered image
// requires v_{(-nu,q)} = conj(v_{(nu,q)}) * (-1)^nu.
struct CoeffVector {
  std::vector<cd> v;

  double norm() const;
};

// Enumerates V with lambda_{|nu|,q} <= lambda; entries sorted ascending by
// lambda, ties broken by smaller |nu| first, then +nu before -nu.
DiscBasis build_basis_bandlimit(int n, double lambda);

// First d eigenfunctions in the same order; conjugate pairs are kept
// together (if a +/-nu pair would straddle the cut, the next nu=0 entry is
// taken instead so |V| == d exactly when possible).
DiscBasis build_basis(int n, int d);

bool satisfies_real_constraint(const CoeffVector& v, const DiscBasis& basis,
                               double tol = 1e-9);
// Symmetrizes v onto the real-image constraint set.
CoeffVector impose_real_constraint(const CoeffVector& v, const DiscBasis& basis);

// Random constraint-satisfying coefficients with unit norm.
CoeffVector random_real_coeffs(const DiscBasis& basis, std::mt19937_64& rng);

// v'_{(nu,q)} = v_{(nu,q)} e^{i nu phi}.
CoeffVector steer(const CoeffVector& v, double phi, const DiscBasis& basis);

// Real grid on the signed 4n x 4n lattice; rejects inputs whose imaginary
// residue exceeds 1e-10 * ||v||.
std::vector<double> render_image(const CoeffVector& v, const DiscBasis& basis);
// Same sum without the realness check (used internally and by oracles).
std::vector<cd> render_complex(const CoeffVector& v, const DiscBasis& basis);

// Least-squares coefficients against the discretized columns (inner product
// over |x| < n). Rejects rank-deficient systems.
CoeffVector project(const std::vector<double>& grid, const DiscBasis& basis);

// Continuous evaluation of the expansion at polar (r, theta); zero for r >= 1.
cd eval_continuous(const CoeffVector& v, const DiscBasis& basis, double r,
                   double theta);

}  // namespace mtd
