#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mtd/common.hpp"

namespace mtd::fftops {

// Thin wrappers over FFTW with a shared plan cache (thread safe; plans are
// created under a mutex, execution uses the new-array interface).
// All transforms are unnormalized unless noted.

void c2c_1d(cd* data, int n, bool inverse);
void c2c_2d(cd* data, int n0, int n1, bool inverse);

// out has n0*(n1/2+1) entries (row-major, last axis halved).
void r2c_2d(const double* in, cd* out, int n0, int n1);
// in is modified; out has n0*n1 entries.
void c2r_2d(cd* in, double* out, int n0, int n1);

void r2c_1d(const double* in, cd* out, int n);
void c2r_1d(cd* in, double* out, int n);

// DFT on the signed grid {-2n,...,2n-1}^dim with the 4n convention:
//   ghat(k) = sum_x g(x) exp(-2*pi*i x.k/(4n)),
// arrays stored row-major with index i = x + 2n per axis. The inverse
// includes the 1/(4n)^dim normalization so inverse(forward(g)) == g.
std::vector<cd> dft_signed_1d(std::span<const cd> g, int n, bool inverse = false);
std::vector<cd> dft_signed_2d(std::span<const cd> g, int n, bool inverse = false);

}  // namespace mtd::fftops
