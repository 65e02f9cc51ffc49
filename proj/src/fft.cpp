#include "mtd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace mtd::fftops {

namespace {

// FFTW plan creation is not thread safe; execution via the new-array
// interface is. Plans are cached per (kind, n0, n1) and created with
// FFTW_UNALIGNED so they can run on any caller buffer.
std::mutex g_plan_mutex;

enum class Kind { c2c_fwd, c2c_inv, r2c, c2r };

fftw_plan get_plan(Kind kind, int n0, int n1) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_tuple(static_cast<int>(kind), n0, n1);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  size_t nc = (kind == Kind::r2c || kind == Kind::c2r)
                  ? static_cast<size_t>(n0) * (n1 > 0 ? n1 / 2 + 1 : n0 / 2 + 1)
                  : static_cast<size_t>(n0) * (n1 > 0 ? n1 : 1);
  size_t nr = static_cast<size_t>(n0) * (n1 > 0 ? n1 : 1);
  fftw_complex* cbuf = fftw_alloc_complex(nc);
  double* rbuf = fftw_alloc_real(nr);
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  fftw_plan p = nullptr;
  switch (kind) {
    case Kind::c2c_fwd:
      p = n1 > 0 ? fftw_plan_dft_2d(n0, n1, cbuf, cbuf, FFTW_FORWARD, flags)
                 : fftw_plan_dft_1d(n0, cbuf, cbuf, FFTW_FORWARD, flags);
      break;
    case Kind::c2c_inv:
      p = n1 > 0 ? fftw_plan_dft_2d(n0, n1, cbuf, cbuf, FFTW_BACKWARD, flags)
                 : fftw_plan_dft_1d(n0, cbuf, cbuf, FFTW_BACKWARD, flags);
      break;
    case Kind::r2c:
      p = n1 > 0 ? fftw_plan_dft_r2c_2d(n0, n1, rbuf, cbuf, flags)
                 : fftw_plan_dft_r2c_1d(n0, rbuf, cbuf, flags);
      break;
    case Kind::c2r:
      p = n1 > 0 ? fftw_plan_dft_c2r_2d(n0, n1, cbuf, rbuf, flags)
                 : fftw_plan_dft_c2r_1d(n0, cbuf, rbuf, flags);
      break;
  }
  fftw_free(cbuf);
  fftw_free(rbuf);
  cache.emplace(key, p);
  return p;
}

inline fftw_complex* as_fftw(cd* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void c2c_1d(cd* data, int n, bool inverse) {
  fftw_plan p = get_plan(inverse ? Kind::c2c_inv : Kind::c2c_fwd, n, 0);
  fftw_execute_dft(p, as_fftw(data), as_fftw(data));
}

void c2c_2d(cd* data, int n0, int n1, bool inverse) {
  fftw_plan p = get_plan(inverse ? Kind::c2c_inv : Kind::c2c_fwd, n0, n1);
  fftw_execute_dft(p, as_fftw(data), as_fftw(data));
}

void r2c_2d(const double* in, cd* out, int n0, int n1) {
  fftw_plan p = get_plan(Kind::r2c, n0, n1);
  fftw_execute_dft_r2c(p, const_cast<double*>(in), as_fftw(out));
}

void c2r_2d(cd* in, double* out, int n0, int n1) {
  fftw_plan p = get_plan(Kind::c2r, n0, n1);
  fftw_execute_dft_c2r(p, as_fftw(in), out);
}

void r2c_1d(const double* in, cd* out, int n) {
  fftw_plan p = get_plan(Kind::r2c, n, 0);
  fftw_execute_dft_r2c(p, const_cast<double*>(in), as_fftw(out));
}

void c2r_1d(cd* in, double* out, int n) {
  fftw_plan p = get_plan(Kind::c2r, n, 0);
  fftw_execute_dft_c2r(p, as_fftw(in), out);
}

std::vector<cd> dft_signed_1d(std::span<const cd> g, int n, bool inverse) {
  const int L = 4 * n;
  require(static_cast<int>(g.size()) == L, ErrorCode::config,
          "dft_signed_1d: size mismatch");
  std::vector<cd> work(g.begin(), g.end());
  c2c_1d(work.data(), L, inverse);
  // Stored index u corresponds to x = u - 2n; shifting origin by 2n on both
  // sides turns the standard FFT into the signed-grid DFT:
  //   out[u] = (-1)^u * FFT[(u + 2n) mod L]   (sign flips for inverse too).
  std::vector<cd> out(L);
  for (int u = 0; u < L; ++u) {
    double s = (u % 2 == 0) ? 1.0 : -1.0;
    out[u] = s * work[(u + 2 * n) % L];
  }
  if (inverse) {
    for (auto& z : out) z /= static_cast<double>(L);
  }
  return out;
}

std::vector<cd> dft_signed_2d(std::span<const cd> g, int n, bool inverse) {
  const int L = 4 * n;
  require(static_cast<int>(g.size()) == L * L, ErrorCode::config,
          "dft_signed_2d: size mismatch");
  std::vector<cd> work(g.begin(), g.end());
  c2c_2d(work.data(), L, L, inverse);
  std::vector<cd> out(static_cast<size_t>(L) * L);
  for (int u0 = 0; u0 < L; ++u0) {
    int s0 = (u0 + 2 * n) % L;
    for (int u1 = 0; u1 < L; ++u1) {
      int s1 = (u1 + 2 * n) % L;
      double s = ((u0 + u1) % 2 == 0) ? 1.0 : -1.0;
      out[static_cast<size_t>(u0) * L + u1] = s * work[static_cast<size_t>(s0) * L + s1];
    }
  }
  if (inverse) {
    double norm = 1.0 / (static_cast<double>(L) * L);
    for (auto& z : out) z *= norm;
  }
  return out;
}

}  // namespace mtd::fftops
