#include <doctest.h>

#include <cmath>

#include "mtd/core_model.hpp"
#include "mtd/disc_basis.hpp"
#include "mtd/invariants.hpp"
#include "mtd/recover.hpp"
#include "mtd/rng.hpp"

using namespace mtd;

namespace {

TargetSignal1D random_signal(int n, uint64_t seed) {
  std::mt19937_64 rng = make_stream(seed, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(2 * n);
  for (double& x : v) x = gauss(rng);
  return {n, std::move(v)};
}

double max_abs_diff(const Bispectrum1D& a, const Bispectrum1D& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.B.size(); ++i) {
    worst = std::max(worst, std::abs(a.B[i] - b.B[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("bispectrum from the invariant matches the DFT oracle") {
  for (int n = 3; n <= 6; ++n) {
    TargetSignal1D f = random_signal(n, 100 + n);
    Bispectrum1D via_v = bispectrum_from_V(auto3_V(f), n);
    Bispectrum1D via_dft = bispectrum_from_dft(f);
    CHECK(max_abs_diff(via_v, via_dft) < 1e-10);
  }
}

TEST_CASE("bispectrum of a delta is identically one") {
  int n = 4;
  std::vector<double> v(2 * n, 0.0);
  v[n] = 1.0;  // delta at x = 0
  TargetSignal1D f{n, std::move(v)};
  Bispectrum1D bis = bispectrum_from_dft(f);
  for (const cd& z : bis.B) CHECK(std::abs(z - cd(1.0, 0.0)) < 1e-12);
}

TEST_CASE("bispectrum of a constant concentrates at the origin") {
  int n = 4;
  double c = 0.7;
  TargetSignal1D f{n, std::vector<double>(2 * n, c)};
  Bispectrum1D bis = bispectrum_from_dft(f);
  double c3 = std::pow(2.0 * n * c, 3);
  for (int k1 = -n; k1 < n; ++k1) {
    for (int k2 = -n; k2 < n; ++k2) {
      cd want = (k1 == 0 && k2 == 0) ? cd(c3, 0.0) : cd(0.0, 0.0);
      CHECK(std::abs(bis.at(k1, k2) - want) < 1e-9);
    }
  }
}

TEST_CASE("bispectrum inversion round trips up to a cyclic shift") {
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + trial % 6;
    TargetSignal1D f = random_signal(n, 200 + trial);
    TargetSignal1D rec = invert_bispectrum(bispectrum_from_dft(f));
    CHECK(align_error_1d(rec, f) < 1e-8);
  }
}

TEST_CASE("inversion is cube-root homogeneous") {
  int n = 5;
  TargetSignal1D f = random_signal(n, 77);
  Bispectrum1D bis = bispectrum_from_dft(f);
  double c = 2.5;
  for (cd& z : bis.B) z *= c * c * c;
  TargetSignal1D rec = invert_bispectrum(bis);
  TargetSignal1D scaled = f;
  for (double& v : scaled.values) v *= c;
  CHECK(align_error_1d(rec, scaled) < 1e-8);
}

TEST_CASE("inversion rejects vanishing DFT entries") {
  int n = 4;
  TargetSignal1D f{n, std::vector<double>(2 * n, 1.0)};  // only a_0 nonzero
  try {
    invert_bispectrum(bispectrum_from_dft(f));
    FAIL("expected inversion rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::inversion);
  }
}

TEST_CASE("align_error_1d recognizes shifts and orthogonality") {
  TargetSignal1D f = random_signal(5, 301);
  for (int tau = -5; tau < 5; ++tau) {
    CHECK(align_error_1d(rotate1d(f, tau), f) < 1e-12);
  }
  // +/- alternating vs constant: orthogonal under every shift
  int n = 4;
  std::vector<double> alt(2 * n), ones(2 * n, 1.0);
  for (int i = 0; i < 2 * n; ++i) alt[i] = (i % 2) ? -1.0 : 1.0;
  TargetSignal1D a{n, std::move(alt)}, b{n, std::move(ones)};
  CHECK(align_error_1d(a, b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("align_error_2d recognizes steering") {
  DiscBasis basis = build_basis(5, 14);
  std::mt19937_64 rng = make_stream(44, 0);
  CoeffVector v = random_real_coeffs(basis, rng);
  for (double phi : {0.0, 0.3, 1.9, -2.4}) {
    CHECK(align_error_2d(steer(v, phi, basis), v, basis) < 1e-6);
  }
  CoeffVector w = random_real_coeffs(basis, rng);
  CHECK(align_error_2d(w, v, basis) > 0.1);
}

TEST_CASE("RealParam round trips and counts dimensions") {
  DiscBasis basis = build_basis(5, 14);
  RealParam param(basis);
  int expect = 0;
  for (const BasisIndex& ix : basis.indices) {
    if (ix.nu == 0) expect += 1;
    if (ix.nu > 0) expect += 2;
  }
  CHECK(param.dims == expect);

  std::mt19937_64 rng = make_stream(45, 0);
  CoeffVector v = random_real_coeffs(basis, rng);
  std::vector<double> x = param.pack(v);
  CHECK(static_cast<int>(x.size()) == param.dims);
  CoeffVector back = param.unpack(x);
  for (size_t l = 0; l < v.v.size(); ++l) {
    CHECK(std::abs(back.v[l] - v.v[l]) < 1e-14);
  }
  CHECK(satisfies_real_constraint(param.unpack(std::vector<double>(
            param.dims, 0.3)), basis));
}

namespace {

// builds the dense-cost function in the real parameterization
CostFn dense_cost(SHatEngine& engine, const RealParam& param,
                  const std::vector<cd>& target) {
  return [&engine, &param, &target](std::span<const double> x,
                                    std::vector<double>* grad) {
    engine.set_coeffs(param.unpack(x));
    if (!grad) return engine.cost_dense(target, nullptr);
    std::vector<cd> dg;
    double c = engine.cost_dense(target, &dg);
    *grad = param.fold(dg);
    return c;
  };
}

}  // namespace

TEST_CASE("dense and binned costs have finite-difference-exact gradients") {
  DiscBasis basis = build_basis(4, 10);
  RealParam param(basis);
  std::mt19937_64 rng = make_stream(46, 0);
  CoeffVector truth = random_real_coeffs(basis, rng);
  SHatEngine teng(basis);
  teng.set_coeffs(truth);
  std::vector<cd> target = teng.dense();
  BinMap bins = bin_map(basis.n);
  std::vector<cd> target_bins = teng.bin_sums(bins);

  CoeffVector v0 = random_real_coeffs(basis, rng);
  std::vector<double> x0 = param.pack(v0);
  SHatEngine engine(basis);

  auto check_grad = [&](const CostFn& f) {
    std::vector<double> grad;
    f(x0, &grad);
    const double h = 1e-5;
    for (int i = 0; i < param.dims; ++i) {
      std::vector<double> xp = x0, xm = x0;
      xp[i] += h;
      xm[i] -= h;
      double fd = (f(xp, nullptr) - f(xm, nullptr)) / (2.0 * h);
      CHECK(std::abs(grad[i] - fd) < 1e-5 * (1.0 + std::abs(fd)));
    }
  };
  check_grad(dense_cost(engine, param, target));
  CostFn binned = [&](std::span<const double> x, std::vector<double>* grad) {
    engine.set_coeffs(param.unpack(x));
    if (!grad) return engine.cost_binned(bins, target_bins, nullptr);
    std::vector<cd> dg;
    double c = engine.cost_binned(bins, target_bins, &dg);
    *grad = param.fold(dg);
    return c;
  };
  check_grad(binned);
}

TEST_CASE("cost is gauge invariant and bounded by the dense cost") {
  DiscBasis basis = build_basis(4, 10);
  std::mt19937_64 rng = make_stream(47, 0);
  CoeffVector truth = random_real_coeffs(basis, rng);
  CoeffVector other = random_real_coeffs(basis, rng);
  SHatEngine teng(basis);
  teng.set_coeffs(truth);
  std::vector<cd> target = teng.dense();
  BinMap bins = bin_map(basis.n);
  std::vector<cd> target_bins = teng.bin_sums(bins);

  SHatEngine engine(basis);
  engine.set_coeffs(other);
  double g0 = engine.cost_dense(target, nullptr);
  double gb0 = engine.cost_binned(bins, target_bins, nullptr);
  for (double phi : {0.7, 2.1, -1.3}) {
    engine.set_coeffs(steer(other, phi, basis));
    CHECK(engine.cost_dense(target, nullptr) ==
          doctest::Approx(g0).epsilon(1e-10));
    CHECK(engine.cost_binned(bins, target_bins, nullptr) ==
          doctest::Approx(gb0).epsilon(1e-10));
  }
  // each bin sum is a sum of at most max-count entries, so Cauchy-Schwarz
  // bounds the binned residual by the dense one
  int max_count = 0;
  for (int c : bins.counts) max_count = std::max(max_count, c);
  CHECK(gb0 <= max_count * g0 * (1.0 + 1e-12));
}

TEST_CASE("minimize solves a quadratic exactly") {
  CostFn quad = [](std::span<const double> x, std::vector<double>* grad) {
    double c = 0.0;
    if (grad) grad->assign(x.size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
      double w = 1.0 + static_cast<double>(i);
      double d = x[i] - 0.5 * static_cast<double>(i);
      c += 0.5 * w * d * d;
      if (grad) (*grad)[i] = w * d;
    }
    return c;
  };
  std::vector<double> x(8, 3.0);
  OptimizerOptions opts;
  opts.grad_tol = 1e-12;
  MinimizeReport rep = minimize(quad, x, opts);
  CHECK(rep.converged);
  CHECK(rep.cost < 1e-10);
  for (size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i] == doctest::Approx(0.5 * static_cast<double>(i)).epsilon(1e-6));
  }
}

TEST_CASE("minimize raises the optimizer error on a wrong gradient") {
  CostFn lying = [](std::span<const double> x, std::vector<double>* grad) {
    double c = 0.0;
    for (double v : x) c += v * v;
    if (grad) grad->assign(x.size(), 1.7);  // bogus
    return c;
  };
  std::vector<double> x(4, 1.0);
  OptimizerOptions opts;
  try {
    minimize(lying, x, opts);
    FAIL("expected optimizer failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::optimizer);
  }
}

TEST_CASE("recover_2d_dense recovers a planted target") {
  DiscBasis basis = build_basis(4, 10);
  std::mt19937_64 rng = make_stream(48, 0);
  CoeffVector truth = random_real_coeffs(basis, rng);
  SHatEngine teng(basis);
  teng.set_coeffs(truth);
  std::vector<cd> target = teng.dense();

  OptimizerOptions opts;
  opts.seed = 7;
  opts.restarts = 8;
  opts.success_cost = 1e-14;
  Recovery2D rec = recover_2d_dense(basis, target, opts, 0, 0, &truth);
  CHECK(rec.report.converged);
  CHECK(rec.aligned_error < 1e-6);
}

TEST_CASE("recover_2d_binned recovers a planted target from bin sums") {
  DiscBasis basis = build_basis(4, 10);
  std::mt19937_64 rng = make_stream(49, 0);
  CoeffVector truth = random_real_coeffs(basis, rng);
  SHatEngine teng(basis);
  teng.set_coeffs(truth);
  BinMap bins = bin_map(basis.n);
  std::vector<cd> target_bins = teng.bin_sums(bins);

  OptimizerOptions opts;
  opts.seed = 11;
  opts.restarts = 8;
  double norm2 = 0.0;
  for (const cd& z : target_bins) norm2 += std::norm(z);
  opts.success_cost = 1e-16 * norm2;
  Recovery2D rec = recover_2d_binned(basis, bins, target_bins, opts, 0, 0,
                                     &truth);
  CHECK(rec.report.converged);
  CHECK(rec.aligned_error < 1e-5);
}

TEST_CASE("warm starts are honored") {
  DiscBasis basis = build_basis(4, 10);
  std::mt19937_64 rng = make_stream(50, 0);
  CoeffVector truth = random_real_coeffs(basis, rng);
  SHatEngine teng(basis);
  teng.set_coeffs(truth);
  std::vector<cd> target = teng.dense();

  OptimizerOptions opts;
  opts.seed = 13;
  opts.restarts = 0;  // no fallback: the warm start must carry the run
  Recovery2D rec = recover_2d_dense(basis, target, opts, 0, 0, &truth, &truth);
  CHECK(rec.report.converged);
  CHECK(rec.aligned_error < 1e-7);
}
