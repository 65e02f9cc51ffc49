#include "mtd/recover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mtd/core_model.hpp"
#include "mtd/fft.hpp"
#include "mtd/rng.hpp"

namespace mtd {

namespace {

int wrap_freq(int k, int n) {
  while (k >= n) k -= 2 * n;
  while (k < -n) k += 2 * n;
  return k;
}

double principal(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

std::vector<cd> dft_target(const TargetSignal1D& f) {
  const int n = f.n;
  std::vector<cd> a(2 * n);
  for (int k = -n; k < n; ++k) {
    cd s(0.0, 0.0);
    for (int x = -n; x < n; ++x) {
      s += f.at(x) * std::polar(1.0, -2.0 * kPi * k * x / (2.0 * n));
    }
    a[static_cast<size_t>(k + n)] = s;
  }
  return a;
}

Bispectrum1D bispectrum_from_dft(const TargetSignal1D& f) {
  const int n = f.n;
  std::vector<cd> a = dft_target(f);
  Bispectrum1D bis;
  bis.n = n;
  bis.B.resize(static_cast<size_t>(2 * n) * 2 * n);
  for (int k1 = -n; k1 < n; ++k1) {
    for (int k2 = -n; k2 < n; ++k2) {
      int k3 = wrap_freq(-k1 - k2, n);
      bis.ref(k1, k2) = a[static_cast<size_t>(k1 + n)] *
                        a[static_cast<size_t>(k2 + n)] *
                        a[static_cast<size_t>(k3 + n)];
    }
  }
  return bis;
}

Bispectrum1D bispectrum_from_V(std::span<const double> V, int n) {
  require(V.size() == static_cast<size_t>(4 * n) * 4 * n, ErrorCode::config,
          "bispectrum_from_V: V must live on the (4n)^2 lag grid");
  std::vector<cd> vc(V.begin(), V.end());
  std::vector<cd> vhat = fftops::dft_signed_2d(vc, n);
  Bispectrum1D bis;
  bis.n = n;
  bis.B.resize(static_cast<size_t>(2 * n) * 2 * n);
  // a_{k1} a_{k2} a_{-k1-k2} = Vhat(2k1, 2k2): the odd-frequency phases of
  // the shift average cancel in the triple product and the 1/(2n) in V eats
  // the leftover shift count
  for (int k1 = -n; k1 < n; ++k1) {
    for (int k2 = -n; k2 < n; ++k2) {
      bis.ref(k1, k2) =
          vhat[static_cast<size_t>(2 * k1 + 2 * n) * 4 * n + (2 * k2 + 2 * n)];
    }
  }
  return bis;
}

namespace {

// Gradient-descent polish of the phase vector against every bispectrum
// entry, |B|-weighted; theta_1 stays fixed (shift gauge), theta_0 and
// theta_{-n} stay on the real axis.
void refine_phases(const Bispectrum1D& bis, double theta0, double s_nyq,
                   std::vector<double>& theta) {
  const int n = bis.n;
  if (n < 3) return;
  auto phase_of = [&](int k) -> double {
    if (k == 0) return theta0;
    if (k == -n) return s_nyq;
    return k > 0 ? theta[k] : -theta[-k];
  };
  auto slot_sign = [&](int k, int j) -> double {
    if (k == j) return 1.0;
    if (k == -j) return -1.0;
    return 0.0;
  };
  auto cost_grad = [&](std::vector<double>* grad) -> double {
    double c = 0.0;
    if (grad) grad->assign(n, 0.0);
    for (int k1 = -n; k1 < n; ++k1) {
      for (int k2 = -n; k2 < n; ++k2) {
        int k3 = wrap_freq(-k1 - k2, n);
        double w = std::abs(bis.at(k1, k2));
        if (w == 0.0) continue;
        double r = principal(phase_of(k1) + phase_of(k2) + phase_of(k3) -
                             std::arg(bis.at(k1, k2)));
        c += w * r * r;
        if (grad) {
          for (int j = 2; j < n; ++j) {
            double s = slot_sign(k1, j) + slot_sign(k2, j) + slot_sign(k3, j);
            if (s != 0.0) (*grad)[j] += 2.0 * w * r * s;
          }
        }
      }
    }
    return c;
  };
  std::vector<double> grad;
  double c = cost_grad(&grad);
  double step = 1e-3;
  for (int it = 0; it < 300; ++it) {
    double gn = 0.0;
    for (int j = 2; j < n; ++j) gn += grad[j] * grad[j];
    if (gn < 1e-24) break;
    std::vector<double> trial = theta;
    for (int j = 2; j < n; ++j) trial[j] -= step * grad[j];
    std::swap(theta, trial);
    std::vector<double> g2;
    double c2 = cost_grad(&g2);
    if (c2 < c) {
      c = c2;
      grad = std::move(g2);
      step *= 1.3;
    } else {
      std::swap(theta, trial);
      step *= 0.4;
      if (step < 1e-12) break;
    }
  }
}

}  // namespace

TargetSignal1D invert_bispectrum(const Bispectrum1D& bis, bool ls_phases) {
  const int n = bis.n;
  require(n >= 1, ErrorCode::config, "invert_bispectrum: empty bispectrum");
  double bmax = 0.0;
  for (const cd& z : bis.B) bmax = std::max(bmax, std::abs(z));
  require(bmax > 0.0, ErrorCode::inversion, "invert_bispectrum: zero bispectrum");
  for (int k = -n; k < n; ++k) {
    int mk = wrap_freq(-k, n);
    require(std::abs(bis.at(k, mk)) >= 1e-9 * bmax, ErrorCode::inversion,
            "invert_bispectrum: vanishing spectrum entry (|B(k,-k)| too small)");
  }

  // magnitudes
  double a0 = std::cbrt(bis.at(0, 0).real());
  std::vector<double> mag(2 * n, 0.0);  // index k + n
  mag[n] = std::abs(a0);
  for (int k = 1; k < n; ++k) {
    double m2 = (bis.at(k, -k) / a0).real();
    double r = std::sqrt(std::max(0.0, m2));
    mag[static_cast<size_t>(k + n)] = r;
    mag[static_cast<size_t>(-k + n)] = r;
  }
  double nyq2 = (bis.at(-n, -n) / a0).real();  // a_{-n}^2, real by symmetry
  mag[0] = std::sqrt(std::max(0.0, nyq2));

  // phases under the arg(a_1) = 0 gauge
  double theta0 = a0 >= 0.0 ? 0.0 : kPi;
  std::vector<double> theta(std::max(n, 2), 0.0);  // theta[k] for k = 1..n-1
  for (int k = 1; k + 1 < n; ++k) {
    // arg B(k,1) = theta_k + theta_1 - theta_{k+1}; the third index stays in
    // {-(n-1),...,-2} for k = 1..n-2 so theta0 never enters
    theta[k + 1] = principal(theta[k] + theta[1] - std::arg(bis.at(k, 1)));
  }
  double theta_nyq = 0.0;
  if (n >= 2) {
    // B(-n,1) = a_{-n} a_1 a_{n-1}
    theta_nyq = principal(std::arg(bis.at(-n, 1)) - theta[n - 1]);
  } else {
    theta_nyq = std::arg(bis.at(-1, -1) / a0) / 2.0;  // n=1: sign is pure gauge
  }

  // close the gauge onto an exact lattice shift: a_{-n} is real, so spread
  // the leftover phase linearly across k
  double s_nyq = std::abs(principal(theta_nyq)) <= kPi / 2.0 ? 0.0 : kPi;
  double beta = principal(theta_nyq - s_nyq) / n;

  if (ls_phases) refine_phases(bis, theta0, s_nyq + n * beta, theta);

  std::vector<cd> a(2 * n);
  a[n] = std::polar(mag[n], theta0);
  for (int k = 1; k < n; ++k) {
    double ph = theta[k] + k * beta;
    a[static_cast<size_t>(k + n)] = std::polar(mag[static_cast<size_t>(k + n)], ph);
    a[static_cast<size_t>(-k + n)] = std::conj(a[static_cast<size_t>(k + n)]);
  }
  a[0] = std::polar(mag[0], s_nyq);
  if (nyq2 < 0.0) a[0] = cd(0.0, 0.0);  // inconsistent Nyquist energy; best effort

  TargetSignal1D out(n, std::vector<double>(2 * n, 0.0));
  double imag_norm = 0.0, real_norm = 0.0;
  for (int x = -n; x < n; ++x) {
    cd s(0.0, 0.0);
    for (int k = -n; k < n; ++k) {
      s += a[static_cast<size_t>(k + n)] *
           std::polar(1.0, 2.0 * kPi * k * x / (2.0 * n));
    }
    s /= 2.0 * n;
    out.ref(x) = s.real();
    real_norm += s.real() * s.real();
    imag_norm += s.imag() * s.imag();
  }
  require(imag_norm <= 1e-12 * std::max(real_norm, 1e-300), ErrorCode::inversion,
          "invert_bispectrum: reconstruction is not real");
  return out;
}

double align_error_1d(const TargetSignal1D& fhat, const TargetSignal1D& f) {
  require(fhat.n == f.n, ErrorCode::config, "align_error_1d: size mismatch");
  double fn = 0.0;
  for (double v : f.values) fn += v * v;
  require(fn > 0.0, ErrorCode::config, "align_error_1d: reference is zero");
  double best = std::numeric_limits<double>::infinity();
  for (int tau = -f.n; tau < f.n; ++tau) {
    TargetSignal1D ft = rotate1d(f, tau);
    double e = 0.0;
    for (int x = -f.n; x < f.n; ++x) {
      double d = fhat.at(x) - ft.at(x);
      e += d * d;
    }
    best = std::min(best, e);
  }
  return std::sqrt(best / fn);
}

double align_error_2d(const CoeffVector& vhat, const CoeffVector& v,
                      const DiscBasis& basis) {
  require(vhat.v.size() == v.v.size() &&
              static_cast<int>(v.v.size()) == basis.d,
          ErrorCode::config, "align_error_2d: size mismatch");
  double vn = v.norm();
  require(vn > 0.0, ErrorCode::config, "align_error_2d: reference is zero");
  auto err = [&](double phi) {
    double e = 0.0;
    for (int l = 0; l < basis.d; ++l) {
      cd d = vhat.v[l] * std::polar(1.0, basis.indices[l].nu * phi) - v.v[l];
      e += std::norm(d);
    }
    return std::sqrt(e);
  };
  const int grid = 720;
  double best_phi = 0.0, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    double phi = 2.0 * kPi * i / grid;
    double e = err(phi);
    if (e < best) {
      best = e;
      best_phi = phi;
    }
  }
  double lo = best_phi - 2.0 * kPi / grid, hi = best_phi + 2.0 * kPi / grid;
  for (int it = 0; it < 80; ++it) {
    double p1 = lo + (hi - lo) / 3.0, p2 = hi - (hi - lo) / 3.0;
    if (err(p1) < err(p2)) {
      hi = p2;
    } else {
      lo = p1;
    }
  }
  best = std::min(best, err(0.5 * (lo + hi)));
  return best / vn;
}

// ---------------------------------------------------------------------------

RealParam::RealParam(const DiscBasis& basis) {
  std::map<std::pair<int, int>, int> where;
  for (int l = 0; l < basis.d; ++l) {
    where[{basis.indices[l].nu, basis.indices[l].q}] = l;
  }
  for (int l = 0; l < basis.d; ++l) {
    int nu = basis.indices[l].nu;
    if (nu < 0) continue;
    Slot s;
    s.idx = l;
    if (nu > 0) {
      auto it = where.find({-nu, basis.indices[l].q});
      require(it != where.end(), ErrorCode::config,
              "RealParam: basis misses a conjugate partner");
      s.partner = it->second;
      s.sign = (nu % 2 == 0) ? 1.0 : -1.0;
      dims += 2;
    } else {
      dims += 1;
    }
    slots.push_back(s);
  }
}

CoeffVector RealParam::unpack(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == dims, ErrorCode::config,
          "RealParam: wrong coordinate count");
  CoeffVector v;
  size_t total = 0;
  for (const Slot& s : slots) total = std::max(total, static_cast<size_t>(std::max(s.idx, s.partner) + 1));
  v.v.assign(total, cd(0.0, 0.0));
  int t = 0;
  for (const Slot& s : slots) {
    if (s.partner < 0) {
      v.v[s.idx] = cd(x[t++], 0.0);
    } else {
      cd z(x[t], x[t + 1]);
      t += 2;
      v.v[s.idx] = z;
      v.v[s.partner] = s.sign * std::conj(z);
    }
  }
  return v;
}

std::vector<double> RealParam::pack(const CoeffVector& v) const {
  std::vector<double> x;
  x.reserve(dims);
  for (const Slot& s : slots) {
    x.push_back(v.v[s.idx].real());
    if (s.partner >= 0) x.push_back(v.v[s.idx].imag());
  }
  return x;
}

std::vector<double> RealParam::fold(const std::vector<cd>& dg) const {
  std::vector<double> x;
  x.reserve(dims);
  for (const Slot& s : slots) {
    if (s.partner < 0) {
      x.push_back(dg[s.idx].real());
    } else {
      cd pj = dg[s.idx], pk = dg[s.partner];
      x.push_back((pj + s.sign * pk).real());
      x.push_back(-pj.imag() + s.sign * pk.imag());
    }
  }
  return x;
}

// ---------------------------------------------------------------------------

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct LineResult {
  bool ok = false;
  double alpha = 0.0, f = 0.0;
  std::vector<double> x, g;
};

// Strong Wolfe line search (bracket + bisection zoom).
LineResult line_search(const CostFn& fn, const std::vector<double>& x0,
                       const std::vector<double>& d, double f0, double g0d) {
  constexpr double c1 = 1e-4, c2 = 0.9;
  LineResult res;
  auto eval = [&](double a, double& fa, std::vector<double>& xa,
                  std::vector<double>& ga, double& dphi) {
    xa.resize(x0.size());
    for (size_t i = 0; i < x0.size(); ++i) xa[i] = x0[i] + a * d[i];
    fa = fn(xa, &ga);
    dphi = dot(ga, d);
  };
  auto zoom = [&](double lo, double flo, double hi) {
    double fa, dphi;
    std::vector<double> xa, ga;
    for (int it = 0; it < 60; ++it) {
      double a = 0.5 * (lo + hi);
      eval(a, fa, xa, ga, dphi);
      if (fa > f0 + c1 * a * g0d || fa >= flo) {
        hi = a;
      } else {
        if (std::abs(dphi) <= -c2 * g0d) {
          res.ok = true;
          res.alpha = a;
          res.f = fa;
          res.x = std::move(xa);
          res.g = std::move(ga);
          return;
        }
        if (dphi * (hi - lo) >= 0.0) hi = lo;
        lo = a;
        flo = fa;
      }
      if (std::abs(hi - lo) < 1e-16 * std::max(1.0, std::abs(lo))) break;
    }
    // fall back to the best sufficient-decrease point seen
    if (flo < f0) {
      eval(lo, fa, xa, ga, dphi);
      res.ok = true;
      res.alpha = lo;
      res.f = fa;
      res.x = std::move(xa);
      res.g = std::move(ga);
    }
  };

  double aprev = 0.0, fprev = f0;
  double a = 1.0;
  double fa, dphi;
  std::vector<double> xa, ga;
  for (int it = 0; it < 40; ++it) {
    eval(a, fa, xa, ga, dphi);
    if (fa > f0 + c1 * a * g0d || (it > 0 && fa >= fprev)) {
      zoom(aprev, fprev, a);
      return res;
    }
    if (std::abs(dphi) <= -c2 * g0d) {
      res.ok = true;
      res.alpha = a;
      res.f = fa;
      res.x = std::move(xa);
      res.g = std::move(ga);
      return res;
    }
    if (dphi >= 0.0) {
      zoom(a, fa, aprev);
      return res;
    }
    aprev = a;
    fprev = fa;
    a *= 2.5;
    if (a > 1e10) break;
  }
  return res;
}

struct BfgsOutcome {
  double cost = 0.0, grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> x;
};

BfgsOutcome bfgs_run(const CostFn& fn, std::vector<double> x,
                     const OptimizerOptions& opts, int iter_budget) {
  const int nd = static_cast<int>(x.size());
  std::vector<double> H(static_cast<size_t>(nd) * nd, 0.0);
  auto reset_h = [&]() {
    std::fill(H.begin(), H.end(), 0.0);
    for (int i = 0; i < nd; ++i) H[static_cast<size_t>(i) * nd + i] = 1.0;
  };
  reset_h();
  std::vector<double> g, d(nd), hg(nd);
  double f = fn(x, &g);
  // tolerance relative to the starting gradient: the attainable floor scales
  // with the data, not with an absolute unit
  const double gtol = opts.grad_tol * std::max(1.0, norm2(g));
  BfgsOutcome out;
  for (int it = 0; it < iter_budget; ++it) {
    double gn = norm2(g);
    if (gn <= gtol) {
      out.converged = true;
      break;
    }
    for (int i = 0; i < nd; ++i) {
      double s = 0.0;
      const double* row = H.data() + static_cast<size_t>(i) * nd;
      for (int j = 0; j < nd; ++j) s += row[j] * g[j];
      d[i] = -s;
    }
    double g0d = dot(g, d);
    if (g0d >= -1e-14 * gn * norm2(d)) {
      reset_h();
      for (int i = 0; i < nd; ++i) d[i] = -g[i];
      g0d = -gn * gn;
    }
    LineResult ls = line_search(fn, x, d, f, g0d);
    ++out.iterations;
    if (!ls.ok) break;
    std::vector<double> s(nd), y(nd);
    for (int i = 0; i < nd; ++i) {
      s[i] = ls.x[i] - x[i];
      y[i] = ls.g[i] - g[i];
    }
    double sy = dot(s, y);
    if (sy > 1e-12 * norm2(s) * norm2(y)) {
      double rho = 1.0 / sy;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      for (int i = 0; i < nd; ++i) {
        double s1 = 0.0;
        for (int j = 0; j < nd; ++j) s1 += H[static_cast<size_t>(i) * nd + j] * y[j];
        hg[i] = s1;
      }
      double yhy = dot(y, hg);
      for (int i = 0; i < nd; ++i) {
        for (int j = 0; j < nd; ++j) {
          H[static_cast<size_t>(i) * nd + j] +=
              -rho * (s[i] * hg[j] + hg[i] * s[j]) +
              rho * (1.0 + rho * yhy) * s[i] * s[j];
        }
      }
    }
    x = std::move(ls.x);
    g = std::move(ls.g);
    f = ls.f;
  }
  out.cost = f;
  out.grad_norm = norm2(g);
  out.x = std::move(x);
  return out;
}

void probe_gradient_or_fail(const CostFn& fn, const std::vector<double>& x0) {
  std::vector<double> g;
  double f0 = fn(x0, &g);
  std::mt19937_64 rng = make_stream(0x9e3779b9, 77);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(x0.size()) - 1);
  int checks = std::min<int>(6, static_cast<int>(x0.size()));
  double scale = 0.0;
  for (double v : g) scale = std::max(scale, std::abs(v));
  for (int c = 0; c < checks; ++c) {
    int i = pick(rng);
    double eps = 1e-5 * (1.0 + std::abs(x0[i]));
    std::vector<double> xp = x0, xm = x0;
    xp[i] += eps;
    xm[i] -= eps;
    double fp = fn(xp, nullptr), fm = fn(xm, nullptr);
    double fd = (fp - fm) / (2.0 * eps);
    // the curvature term sets the attainable finite-difference accuracy
    double curv = std::abs(fp + fm - 2.0 * f0) / (2.0 * eps);
    double ref = std::max({std::abs(g[i]), std::abs(fd), curv, scale * 1e-6});
    require(std::abs(fd - g[i]) <= 1e-3 * ref + 1e-6, ErrorCode::optimizer,
            "minimize: gradient fails the finite-difference probe");
  }
}

}  // namespace

MinimizeReport minimize(const CostFn& f, std::vector<double>& x,
                        const OptimizerOptions& opts,
                        const RestartSampler& sampler) {
  require(!x.empty(), ErrorCode::config, "minimize: empty start point");
  require(opts.grad_tol > 0.0 && opts.max_iters > 0, ErrorCode::config,
          "minimize: tolerances must be positive");
  if (opts.probe_gradient) probe_gradient_or_fail(f, x);

  MinimizeReport rep;
  std::vector<double> best_x;
  double best_cost = std::numeric_limits<double>::infinity();
  bool best_conv = false;
  double best_gn = 0.0;
  int best_iters = 0;
  std::mt19937_64 rng = make_stream(opts.seed, 0xB0F5);

  for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
    std::vector<double> start;
    if (attempt == 0) {
      start = x;
    } else if (sampler) {
      start = sampler(attempt);
    } else {
      start = x;
      std::normal_distribution<double> noise(0.0, 0.5 * (norm2(x) + 1.0) /
                                                      std::sqrt(x.size()));
      for (double& v : start) v += noise(rng);
    }
    BfgsOutcome run = bfgs_run(f, std::move(start), opts, opts.max_iters);
    rep.restarts_used = attempt;
    if (run.cost < best_cost) {
      best_cost = run.cost;
      best_x = run.x;
      best_conv = run.converged;
      best_gn = run.grad_norm;
      best_iters = run.iterations;
    }
    bool good = run.converged &&
                (opts.success_cost < 0.0 || run.cost <= opts.success_cost);
    if (good) break;
  }
  x = best_x;
  rep.cost = best_cost;
  rep.converged = best_conv;
  rep.grad_norm = best_gn;
  rep.iterations = best_iters;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

Recovery2D recover_2d_impl(const DiscBasis& basis, std::span<const cd> dense,
                           const BinMap* bins, std::span<const cd> target_bins,
                           const OptimizerOptions& opts, int angles, int threads,
                           const CoeffVector* truth, const CoeffVector* warm) {
  SHatEngine engine(basis, angles, threads);
  RealParam param(basis);

  CostFn cost = [&](std::span<const double> x, std::vector<double>* grad) {
    engine.set_coeffs(param.unpack(x));
    std::vector<cd> cgrad;
    double c = bins ? engine.cost_binned(*bins, target_bins, grad ? &cgrad : nullptr)
                    : engine.cost_dense(dense, grad ? &cgrad : nullptr);
    if (grad) *grad = param.fold(cgrad);
    return c;
  };

  double target_norm2 = 0.0;
  if (bins) {
    for (const cd& z : target_bins) target_norm2 += std::norm(z);
  } else {
    for (const cd& z : dense) target_norm2 += std::norm(z);
  }
  double target_norm = std::sqrt(target_norm2);

  std::mt19937_64 rng = make_stream(opts.seed, 0x2D5E);
  auto random_start = [&]() {
    CoeffVector vr = random_real_coeffs(basis, rng);
    engine.set_coeffs(vr);
    double sn = 0.0;
    if (bins) {
      for (const cd& z : engine.bin_sums(*bins)) sn += std::norm(z);
    } else {
      for (const cd& z : engine.dense()) sn += std::norm(z);
    }
    sn = std::sqrt(sn);
    double scale = sn > 0.0 ? std::cbrt(target_norm / sn) : 1.0;
    for (cd& z : vr.v) z *= scale * opts.init_scale;
    return param.pack(vr);
  };

  std::vector<double> x = warm ? param.pack(*warm) : random_start();
  MinimizeReport rep =
      minimize(cost, x, opts, [&](int) { return random_start(); });

  Recovery2D out;
  out.v = param.unpack(x);
  out.report = rep;
  if (truth) out.aligned_error = align_error_2d(out.v, *truth, basis);
  return out;
}

}  // namespace

Recovery2D recover_2d_dense(const DiscBasis& basis, std::span<const cd> target,
                            const OptimizerOptions& opts, int angles,
                            int threads, const CoeffVector* truth,
                            const CoeffVector* warm) {
  require(target.size() == basis.npix() * basis.npix(), ErrorCode::config,
          "recover_2d_dense: target tensor size mismatch");
  return recover_2d_impl(basis, target, nullptr, {}, opts, angles, threads,
                         truth, warm);
}

Recovery2D recover_2d_binned(const DiscBasis& basis, const BinMap& bins,
                             std::span<const cd> target_bins,
                             const OptimizerOptions& opts, int angles,
                             int threads, const CoeffVector* truth,
                             const CoeffVector* warm) {
  require(static_cast<int>(target_bins.size()) == bins.bin_count,
          ErrorCode::config, "recover_2d_binned: target bin count mismatch");
  return recover_2d_impl(basis, {}, &bins, target_bins, opts, angles, threads,
                         truth, warm);
}

}  // namespace mtd
