#include "mtd/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mtd/core_model.hpp"
#include "mtd/fft.hpp"
#include "mtd/parallel.hpp"

namespace mtd {

double mean_T(const TargetSignal1D& f) {
  double s = 0.0;
  for (double x : f.values) s += x;
  return s / (2.0 * f.n);
}

std::vector<double> auto2_U(const TargetSignal1D& f) {
  const int n = f.n;
  std::vector<double> u(4 * n, 0.0);
  for (int tau = -n; tau < n; ++tau) {
    TargetSignal1D ft = rotate1d(f, tau);
    for (int x = -n; x < n; ++x) {
      double fx = ft.at(x);
      if (fx == 0.0) continue;
      for (int y = -n; y < n; ++y) {
        u[static_cast<size_t>(y - x + 2 * n)] += fx * ft.at(y);
      }
    }
  }
  // 1/(2n) over the shift average only; this is the convention under which
  // the second-order measurement autocorrelation has expectation (gamma/n) U
  for (double& v : u) v /= 2.0 * n;
  return u;
}

std::vector<double> auto3_V(const TargetSignal1D& f) {
  const int n = f.n, L = 4 * n;
  std::vector<double> v(static_cast<size_t>(L) * L, 0.0);
  for (int tau = -n; tau < n; ++tau) {
    TargetSignal1D ft = rotate1d(f, tau);
    for (int x = -n; x < n; ++x) {
      double fx = ft.at(x);
      if (fx == 0.0) continue;
      for (int y1 = -n; y1 < n; ++y1) {
        double f1 = fx * ft.at(y1);
        if (f1 == 0.0) continue;
        size_t row = static_cast<size_t>(y1 - x + 2 * n) * L;
        for (int y2 = -n; y2 < n; ++y2) {
          v[row + (y2 - x + 2 * n)] += f1 * ft.at(y2);
        }
      }
    }
  }
  // 1/(2n) over the shift average only, matching E[A_M] = (gamma/n) V + bias
  for (double& z : v) z /= 2.0 * n;
  return v;
}

std::vector<double> autocorr3_1d(const Micrograph& mic, int n) {
  mic.validate();
  require(mic.dim == 1, ErrorCode::config, "autocorr3_1d: micrograph must be 1D");
  const int m = mic.m, L = 4 * n;
  require(m >= 4 * n, ErrorCode::config, "autocorr3_1d: m must be at least 4n");
  // extended copy removes the modular arithmetic from the inner loop
  std::vector<double> ext(static_cast<size_t>(m) + 4 * n);
  for (int i = 0; i < m + 4 * n; ++i) {
    ext[i] = mic.pixels[static_cast<size_t>(((i - 2 * n) % m + m) % m)];
  }
  const double* e = ext.data() + 2 * n;
  std::vector<double> out(static_cast<size_t>(L) * L, 0.0);
  for (int x1 = -2 * n; x1 < 2 * n; ++x1) {
    for (int x2 = -2 * n; x2 < 2 * n; ++x2) {
      double s = 0.0;
      for (int x = 0; x < m; ++x) s += e[x] * e[x + x1] * e[x + x2];
      out[static_cast<size_t>(x1 + 2 * n) * L + (x2 + 2 * n)] = s / m;
    }
  }
  return out;
}

namespace {

int next_fast_size(int n) {
  for (int s = n;; ++s) {
    int r = s;
    for (int f : {2, 3, 5, 7}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return s;
  }
}

}  // namespace

std::vector<double> autocorr3_2d(const Micrograph& mic, int n, int threads) {
  mic.validate();
  require(mic.dim == 2, ErrorCode::config, "autocorr3_2d: micrograph must be 2D");
  const int m = mic.m, L = 4 * n;
  require(m >= 8 * n, ErrorCode::config, "autocorr3_2d: m must be at least 8n");
  const size_t nl = static_cast<size_t>(L) * L;  // lag count per argument
  const int Q = next_fast_size(m + 2 * n + 1);   // pad so small lags never wrap
  const size_t qh = static_cast<size_t>(Q) * (Q / 2 + 1);

  // spectrum of the zero-padded measurement, shared across lags
  std::vector<double> mpad(static_cast<size_t>(Q) * Q, 0.0);
  for (int r = 0; r < m; ++r) {
    std::copy_n(mic.pixels.data() + static_cast<size_t>(r) * m, m,
                mpad.data() + static_cast<size_t>(r) * Q);
  }
  std::vector<cd> mhat(qh);
  fftops::r2c_2d(mpad.data(), mhat.data(), Q, Q);

  std::vector<double> out(nl * nl, 0.0);
  const double norm = 1.0 / (static_cast<double>(Q) * Q * m * m);

  parallel_blocks(0, static_cast<int64_t>(nl), [&](int64_t lo, int64_t hi, int) {
    std::vector<double> pbuf(static_cast<size_t>(Q) * Q, 0.0);
    std::vector<cd> phat(qh);
    std::vector<double> corr(static_cast<size_t>(Q) * Q);
    for (int64_t il = lo; il < hi; ++il) {
      int a = static_cast<int>(il / L) - 2 * n;
      int b = static_cast<int>(il % L) - 2 * n;
      // P(x) = M(x) M(x + x1) where both factors are in frame
      int r0 = std::max(0, -a), r1 = std::min(m, m - a);
      int c0 = std::max(0, -b), c1 = std::min(m, m - b);
      std::fill(pbuf.begin(), pbuf.end(), 0.0);
      for (int r = r0; r < r1; ++r) {
        const double* row = mic.pixels.data() + static_cast<size_t>(r) * m;
        const double* rowl = mic.pixels.data() + static_cast<size_t>(r + a) * m + b;
        double* dst = pbuf.data() + static_cast<size_t>(r) * Q;
        for (int c = c0; c < c1; ++c) dst[c] = row[c] * rowl[c];
      }
      fftops::r2c_2d(pbuf.data(), phat.data(), Q, Q);
      for (size_t i = 0; i < qh; ++i) phat[i] = std::conj(phat[i]) * mhat[i];
      fftops::c2r_2d(phat.data(), corr.data(), Q, Q);
      double* dst = out.data() + static_cast<size_t>(il) * nl;
      for (int u = -2 * n; u < 2 * n; ++u) {
        size_t ru = static_cast<size_t>((u + Q) % Q) * Q;
        for (int v = -2 * n; v < 2 * n; ++v) {
          dst[static_cast<size_t>(u + 2 * n) * L + (v + 2 * n)] =
              corr[ru + (v + Q) % Q] * norm;
        }
      }
    }
  }, threads);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

uint64_t bin_key(int n, double b1, double b2, int a, int b, int c, int d) {
  bool z1 = (a == 0 && b == 0), z2 = (c == 0 && d == 0);
  double m1 = std::sqrt(static_cast<double>(a) * a + static_cast<double>(b) * b);
  double m2 = std::sqrt(static_cast<double>(c) * c + static_cast<double>(d) * d);
  uint64_t f1 = static_cast<uint64_t>(std::floor(b1 * m1));
  uint64_t f2 = static_cast<uint64_t>(std::floor(b1 * m2));
  (void)n;
  if (z1 && z2) return 1ULL << 62;
  if (z1) return (2ULL << 62) | f2;
  if (z2) return (3ULL << 62) | f1;
  double dot = static_cast<double>(a) * c + static_cast<double>(b) * d;
  double cross = static_cast<double>(a) * d - static_cast<double>(b) * c;
  double theta = std::atan2(std::abs(cross), dot);  // [0, pi]
  uint64_t t = static_cast<uint64_t>(std::floor(b2 * theta));
  return (f1 << 40) | (f2 << 16) | t;
}

}  // namespace

BinMap bin_map(int n, double b1, double b2) {
  require(b1 > 0.0, ErrorCode::config, "bin_map: b1 must be positive");
  if (b2 <= 0.0) b2 = 6.0 / kPi;
  const int L = 4 * n;
  const size_t nl = static_cast<size_t>(L) * L;
  BinMap bins;
  bins.n = n;
  bins.b1 = b1;
  bins.b2 = b2;
  bins.flat.assign(nl * nl, -1);
  std::unordered_map<uint64_t, int32_t> ids;
  for (size_t i1 = 0; i1 < nl; ++i1) {
    int a = static_cast<int>(i1 / L) - 2 * n;
    int b = static_cast<int>(i1 % L) - 2 * n;
    for (size_t i2 = 0; i2 < nl; ++i2) {
      int c = static_cast<int>(i2 / L) - 2 * n;
      int d = static_cast<int>(i2 % L) - 2 * n;
      uint64_t key = bin_key(n, b1, b2, a, b, c, d);
      auto [it, inserted] = ids.emplace(key, static_cast<int32_t>(ids.size()));
      int32_t id = it->second;
      bins.flat[i1 * nl + i2] = id;
      if (inserted) bins.counts.push_back(0);
      ++bins.counts[id];
    }
  }
  bins.bin_count = static_cast<int>(ids.size());
  return bins;
}

std::vector<cd> bin_reduce(std::span<const cd> tensor, const BinMap& bins) {
  require(tensor.size() == bins.flat.size(), ErrorCode::config,
          "bin_reduce: tensor and bin map sizes differ");
  std::vector<cd> out(bins.bin_count, cd(0.0, 0.0));
  for (size_t i = 0; i < tensor.size(); ++i) out[bins.flat[i]] += tensor[i];
  return out;
}

// ---------------------------------------------------------------------------

AngularDesign angular_design(const DiscBasis& basis, int angles) {
  AngularDesign d;
  d.basis = &basis;
  d.angles = angles > 0 ? angles : basis.angle_count();
  d.phis.resize(d.angles);
  for (int j = 0; j < d.angles; ++j) d.phis[j] = 2.0 * kPi * j / d.angles;
  return d;
}

std::vector<cd> s_hat_truth(const CoeffVector& v, const DiscBasis& basis,
                            int angles) {
  const int L = angles > 0 ? angles : basis.angle_count();
  const size_t np = basis.npix();
  const int g = basis.grid();
  const double weight = 2.0 * kPi / L;

  std::vector<int> neg(static_cast<size_t>(g) * g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      int w = -(i - 2 * basis.n) - (j - 2 * basis.n);
      while (w >= 2 * basis.n) w -= g;
      while (w < -2 * basis.n) w += g;
      neg[static_cast<size_t>(i) * g + j] = w + 2 * basis.n;
    }
  }

  std::vector<cd> out(np * np, cd(0.0, 0.0));
  for (int a = 0; a < L; ++a) {
    double phi = 2.0 * kPi * a / L;
    std::vector<cd> grid = render_complex(steer(v, phi, basis), basis);
    std::vector<cd> fhat = fftops::dft_signed_2d(grid, basis.n);
    for (size_t i1 = 0; i1 < np; ++i1) {
      cd f1 = weight * fhat[i1];
      int n10 = static_cast<int>(i1) / g, n11 = static_cast<int>(i1) % g;
      cd* row = out.data() + i1 * np;
      for (size_t i2 = 0; i2 < np; ++i2) {
        int n20 = static_cast<int>(i2) / g, n21 = static_cast<int>(i2) % g;
        size_t i3 = static_cast<size_t>(neg[static_cast<size_t>(n10) * g + n20]) * g +
                    neg[static_cast<size_t>(n11) * g + n21];
        row[i2] += f1 * fhat[i2] * fhat[i3];
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

SHatEngine::SHatEngine(const DiscBasis& basis, int angles, int threads)
    : basis_(&basis),
      angles_(angles > 0 ? angles : basis.angle_count()),
      threads_(threads),
      weight_(2.0 * kPi / (angles > 0 ? angles : basis.angle_count())) {
  const int g = basis.grid();
  neg_sum_.resize(static_cast<size_t>(g) * g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      int w = -(i - 2 * basis.n) - (j - 2 * basis.n);
      while (w >= 2 * basis.n) w -= g;
      while (w < -2 * basis.n) w += g;
      neg_sum_[static_cast<size_t>(i) * g + j] = w + 2 * basis.n;
    }
  }
}

void SHatEngine::set_coeffs(const CoeffVector& v) {
  require(static_cast<int>(v.v.size()) == basis_->d, ErrorCode::config,
          "SHatEngine: coefficient vector length differs from basis");
  const size_t np = basis_->npix();
  const int N = basis_->N, L = angles_;
  // G_nu(k) = sum_q v_{nu,q} Psi_hat_{nu,q}(k), then
  // Fhat_{phi_j}(k) = sum_nu G_nu(k) e^{i nu phi_j}
  std::vector<std::vector<cd>> gnu(2 * N + 1);
  for (auto& g : gnu) g.assign(np, cd(0.0, 0.0));
  for (int l = 0; l < basis_->d; ++l) {
    cd c = v.v[l];
    if (c == cd(0.0, 0.0)) continue;
    auto& g = gnu[basis_->indices[l].nu + N];
    const auto& col = basis_->psi_hat[l];
    for (size_t k = 0; k < np; ++k) g[k] += c * col[k];
  }
  std::vector<cd> phase(static_cast<size_t>(2 * N + 1) * L);
  for (int nu = -N; nu <= N; ++nu) {
    for (int j = 0; j < L; ++j) {
      phase[static_cast<size_t>(nu + N) * L + j] =
          std::polar(1.0, nu * 2.0 * kPi * j / L);
    }
  }
  fhat_.assign(np * L, cd(0.0, 0.0));
  parallel_blocks(0, static_cast<int64_t>(np), [&](int64_t lo, int64_t hi, int) {
    for (int64_t k = lo; k < hi; ++k) {
      cd* dst = fhat_.data() + k * L;
      for (int nu = -N; nu <= N; ++nu) {
        cd gk = gnu[nu + N][k];
        if (gk == cd(0.0, 0.0)) continue;
        const cd* ph = phase.data() + static_cast<size_t>(nu + N) * L;
        for (int j = 0; j < L; ++j) dst[j] += gk * ph[j];
      }
    }
  }, threads_);
}

cd SHatEngine::value_at(size_t i1, size_t i2) const {
  const int g = basis_->grid(), L = angles_;
  int a1 = static_cast<int>(i1) / g, b1 = static_cast<int>(i1) % g;
  int a2 = static_cast<int>(i2) / g, b2 = static_cast<int>(i2) % g;
  size_t i3 = static_cast<size_t>(neg_sum_[static_cast<size_t>(a1) * g + a2]) * g +
              neg_sum_[static_cast<size_t>(b1) * g + b2];
  const cd* f1 = fhat_.data() + i1 * L;
  const cd* f2 = fhat_.data() + i2 * L;
  const cd* f3 = fhat_.data() + i3 * L;
  cd s(0.0, 0.0);
  for (int j = 0; j < L; ++j) s += f1[j] * f2[j] * f3[j];
  return weight_ * s;
}

std::vector<cd> SHatEngine::gradient_at(size_t i1, size_t i2) const {
  const int g = basis_->grid(), L = angles_;
  int a1 = static_cast<int>(i1) / g, b1 = static_cast<int>(i1) % g;
  int a2 = static_cast<int>(i2) / g, b2 = static_cast<int>(i2) % g;
  size_t i3 = static_cast<size_t>(neg_sum_[static_cast<size_t>(a1) * g + a2]) * g +
              neg_sum_[static_cast<size_t>(b1) * g + b2];
  const cd* f1 = fhat_.data() + i1 * L;
  const cd* f2 = fhat_.data() + i2 * L;
  const cd* f3 = fhat_.data() + i3 * L;
  std::vector<cd> grad(basis_->d, cd(0.0, 0.0));
  for (int l = 0; l < basis_->d; ++l) {
    const auto& psi = basis_->psi_hat[l];
    int nu = basis_->indices[l].nu;
    cd s(0.0, 0.0);
    for (int j = 0; j < L; ++j) {
      cd u1 = psi[i1], u2 = psi[i2], u3 = psi[i3];
      cd ph = std::polar(1.0, nu * 2.0 * kPi * j / L);
      s += ph * (u1 * f2[j] * f3[j] + f1[j] * u2 * f3[j] + f1[j] * f2[j] * u3);
    }
    grad[l] = weight_ * s;
  }
  return grad;
}

std::vector<cd> SHatEngine::dense() const {
  const size_t np = basis_->npix();
  std::vector<cd> out(np * np);
  parallel_blocks(0, static_cast<int64_t>(np), [&](int64_t lo, int64_t hi, int) {
    for (int64_t i1 = lo; i1 < hi; ++i1) {
      for (size_t i2 = 0; i2 < np; ++i2) {
        out[static_cast<size_t>(i1) * np + i2] = value_at(i1, i2);
      }
    }
  }, threads_);
  return out;
}

std::vector<cd> SHatEngine::bin_sums(const BinMap& bins) const {
  const size_t np = basis_->npix();
  require(bins.flat.size() == np * np, ErrorCode::config,
          "bin_sums: bin map does not match basis grid");
  int workers = threads_ > 0 ? threads_ : default_thread_count();
  std::vector<std::vector<cd>> partial(workers);
  parallel_blocks(0, static_cast<int64_t>(np), [&](int64_t lo, int64_t hi, int w) {
    auto& acc = partial[w];
    acc.assign(bins.bin_count, cd(0.0, 0.0));
    for (int64_t i1 = lo; i1 < hi; ++i1) {
      const int32_t* row = bins.flat.data() + static_cast<size_t>(i1) * np;
      for (size_t i2 = 0; i2 < np; ++i2) {
        acc[row[i2]] += value_at(static_cast<size_t>(i1), i2);
      }
    }
  }, workers);
  std::vector<cd> out(bins.bin_count, cd(0.0, 0.0));
  for (const auto& acc : partial) {
    for (size_t t = 0; t < acc.size(); ++t) out[t] += acc[t];
  }
  return out;
}

std::vector<cd> SHatEngine::fold_gradient(const std::vector<cd>& dcoef) const {
  // dcoef[k*L + j] holds the accumulated pair weights; contract with
  // u_l(phi_j, k) = Psi_hat_l(k) e^{i nu_l phi_j} via the per-order sums
  // E_nu(k) = sum_j dcoef[k][j] e^{i nu phi_j}.
  const size_t np = basis_->npix();
  const int N = basis_->N, L = angles_;
  std::vector<cd> phase(static_cast<size_t>(2 * N + 1) * L);
  for (int nu = -N; nu <= N; ++nu) {
    for (int j = 0; j < L; ++j) {
      phase[static_cast<size_t>(nu + N) * L + j] =
          std::polar(1.0, nu * 2.0 * kPi * j / L);
    }
  }
  std::vector<cd> enu(static_cast<size_t>(2 * N + 1) * np, cd(0.0, 0.0));
  parallel_blocks(0, static_cast<int64_t>(np), [&](int64_t lo, int64_t hi, int) {
    for (int64_t k = lo; k < hi; ++k) {
      const cd* src = dcoef.data() + k * L;
      for (int nu = -N; nu <= N; ++nu) {
        const cd* ph = phase.data() + static_cast<size_t>(nu + N) * L;
        cd s(0.0, 0.0);
        for (int j = 0; j < L; ++j) s += src[j] * ph[j];
        enu[static_cast<size_t>(nu + N) * np + k] = s;
      }
    }
  }, threads_);
  std::vector<cd> grad(basis_->d, cd(0.0, 0.0));
  for (int l = 0; l < basis_->d; ++l) {
    const auto& psi = basis_->psi_hat[l];
    const cd* e = enu.data() + static_cast<size_t>(basis_->indices[l].nu + N) * np;
    cd s(0.0, 0.0);
    for (size_t k = 0; k < np; ++k) s += psi[k] * e[k];
    grad[l] = weight_ * s;
  }
  return grad;
}

namespace {

struct CostPartial {
  double cost = 0.0;
  std::vector<cd> dcoef;  // k x L accumulation for the gradient
};

}  // namespace

double SHatEngine::cost_dense(std::span<const cd> target, std::vector<cd>* grad) const {
  const size_t np = basis_->npix();
  const int g = basis_->grid(), L = angles_;
  require(target.size() == np * np, ErrorCode::config,
          "cost_dense: target tensor size mismatch");
  int workers = threads_ > 0 ? threads_ : default_thread_count();
  std::vector<CostPartial> partial(workers);
  // S and the target are symmetric in (k1,k2); iterate ordered pairs once.
  parallel_blocks(0, static_cast<int64_t>(np), [&](int64_t lo, int64_t hi, int w) {
    auto& acc = partial[w];
    if (grad) acc.dcoef.assign(np * static_cast<size_t>(L), cd(0.0, 0.0));
    std::vector<cd> p12(L), p13(L), p23(L);
    for (int64_t i1 = lo; i1 < hi; ++i1) {
      int a1 = static_cast<int>(i1) / g, b1 = static_cast<int>(i1) % g;
      const cd* f1 = fhat_.data() + static_cast<size_t>(i1) * L;
      for (size_t i2 = static_cast<size_t>(i1); i2 < np; ++i2) {
        int a2 = static_cast<int>(i2) / g, b2 = static_cast<int>(i2) % g;
        size_t i3 =
            static_cast<size_t>(neg_sum_[static_cast<size_t>(a1) * g + a2]) * g +
            neg_sum_[static_cast<size_t>(b1) * g + b2];
        const cd* f2 = fhat_.data() + i2 * L;
        const cd* f3 = fhat_.data() + i3 * L;
        cd s(0.0, 0.0);
        for (int j = 0; j < L; ++j) {
          p12[j] = f1[j] * f2[j];
          p13[j] = f1[j] * f3[j];
          p23[j] = f2[j] * f3[j];
          s += p12[j] * f3[j];
        }
        s *= weight_;
        cd r = s - target[static_cast<size_t>(i1) * np + i2];
        double mult = (static_cast<size_t>(i1) == i2) ? 1.0 : 2.0;
        acc.cost += 0.5 * mult * std::norm(r);
        if (grad) {
          cd wgt = mult * std::conj(r);
          cd* d1 = acc.dcoef.data() + static_cast<size_t>(i1) * L;
          cd* d2 = acc.dcoef.data() + i2 * L;
          cd* d3 = acc.dcoef.data() + i3 * L;
          for (int j = 0; j < L; ++j) {
            d3[j] += wgt * p12[j];
            d2[j] += wgt * p13[j];
            d1[j] += wgt * p23[j];
          }
        }
      }
    }
  }, workers);
  double cost = 0.0;
  for (const auto& acc : partial) cost += acc.cost;
  if (grad) {
    std::vector<cd> dcoef(np * static_cast<size_t>(L), cd(0.0, 0.0));
    for (const auto& acc : partial) {
      for (size_t i = 0; i < dcoef.size(); ++i) dcoef[i] += acc.dcoef[i];
    }
    *grad = fold_gradient(dcoef);
  }
  return cost;
}

double SHatEngine::cost_binned(const BinMap& bins, std::span<const cd> target_bins,
                               std::vector<cd>* grad) const {
  const size_t np = basis_->npix();
  const int g = basis_->grid(), L = angles_;
  require(bins.flat.size() == np * np, ErrorCode::config,
          "cost_binned: bin map does not match basis grid");
  require(static_cast<int>(target_bins.size()) == bins.bin_count, ErrorCode::config,
          "cost_binned: target bin count mismatch");
  int workers = threads_ > 0 ? threads_ : default_thread_count();

  // pass 1: per-bin sums of the forward model
  std::vector<std::vector<cd>> partial_sums(workers);
  parallel_blocks(0, static_cast<int64_t>(np), [&](int64_t lo, int64_t hi, int w) {
    auto& acc = partial_sums[w];
    acc.assign(bins.bin_count, cd(0.0, 0.0));
    for (int64_t i1 = lo; i1 < hi; ++i1) {
      for (size_t i2 = static_cast<size_t>(i1); i2 < np; ++i2) {
        cd s = value_at(static_cast<size_t>(i1), i2);
        acc[bins.flat[static_cast<size_t>(i1) * np + i2]] += s;
        if (i2 != static_cast<size_t>(i1)) acc[bins.flat[i2 * np + i1]] += s;
      }
    }
  }, workers);
  std::vector<cd> resid(bins.bin_count, cd(0.0, 0.0));
  for (const auto& acc : partial_sums) {
    for (size_t t = 0; t < resid.size(); ++t) resid[t] += acc[t];
  }
  double cost = 0.0;
  for (size_t t = 0; t < resid.size(); ++t) {
    resid[t] -= target_bins[t];
    cost += 0.5 * std::norm(resid[t]);
  }
  if (!grad) return cost;

  // pass 2: pair weights from the bin residuals
  std::vector<CostPartial> partial(workers);
  parallel_blocks(0, static_cast<int64_t>(np), [&](int64_t lo, int64_t hi, int w) {
    auto& acc = partial[w];
    acc.dcoef.assign(np * static_cast<size_t>(L), cd(0.0, 0.0));
    std::vector<cd> p12(L), p13(L), p23(L);
    for (int64_t i1 = lo; i1 < hi; ++i1) {
      int a1 = static_cast<int>(i1) / g, b1 = static_cast<int>(i1) % g;
      const cd* f1 = fhat_.data() + static_cast<size_t>(i1) * L;
      for (size_t i2 = static_cast<size_t>(i1); i2 < np; ++i2) {
        cd wgt = std::conj(resid[bins.flat[static_cast<size_t>(i1) * np + i2]]);
        if (i2 != static_cast<size_t>(i1)) {
          wgt += std::conj(resid[bins.flat[i2 * np + i1]]);
        }
        if (wgt == cd(0.0, 0.0)) continue;
        int a2 = static_cast<int>(i2) / g, b2 = static_cast<int>(i2) % g;
        size_t i3 =
            static_cast<size_t>(neg_sum_[static_cast<size_t>(a1) * g + a2]) * g +
            neg_sum_[static_cast<size_t>(b1) * g + b2];
        const cd* f2 = fhat_.data() + i2 * L;
        const cd* f3 = fhat_.data() + i3 * L;
        cd* d1 = acc.dcoef.data() + static_cast<size_t>(i1) * L;
        cd* d2 = acc.dcoef.data() + i2 * L;
        cd* d3 = acc.dcoef.data() + i3 * L;
        for (int j = 0; j < L; ++j) {
          d3[j] += wgt * f1[j] * f2[j];
          d2[j] += wgt * f1[j] * f3[j];
          d1[j] += wgt * f2[j] * f3[j];
        }
      }
    }
  }, workers);
  std::vector<cd> dcoef(np * static_cast<size_t>(L), cd(0.0, 0.0));
  for (const auto& acc : partial) {
    for (size_t i = 0; i < dcoef.size(); ++i) dcoef[i] += acc.dcoef[i];
  }
  *grad = fold_gradient(dcoef);
  return cost;
}

}  // namespace mtd
