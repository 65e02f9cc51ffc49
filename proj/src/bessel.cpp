#include "mtd/bessel.hpp"

#include <cmath>
#include <cstdlib>

#include "mtd/common.hpp"

namespace mtd {

namespace {

// Ascending power series in long double. Safe (no catastrophic cancellation)
// when x is not much larger than the order.
double series_j(int nu, double x) {
  long double half = static_cast<long double>(x) / 2.0L;
  long double term = 1.0L;
  for (int k = 1; k <= nu; ++k) term *= half / k;  // (x/2)^nu / nu!
  long double sum = term;
  long double x2 = half * half;
  for (int k = 1; k < 4000; ++k) {
    term *= -x2 / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-24L * std::abs(sum) + 1e-320L) break;
  }
  return static_cast<double>(sum);
}

// Miller backward recurrence normalized by 1 = J_0 + 2*sum_k J_{2k}.
double miller_j(int nu, double x) {
  int top = static_cast<int>(std::max<double>(nu, x)) + 40 +
            static_cast<int>(2.0 * std::sqrt(std::max<double>(nu, x)));
  if (top % 2) ++top;
  long double jp = 0.0L, jc = 1e-300L;
  long double norm = 2.0L * jc;  // top is even, so J_top enters the sum
  long double target = 0.0L;
  for (int k = top; k >= 1; --k) {
    long double jm = (2.0L * k / x) * jc - jp;
    jp = jc;
    jc = jm;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? jc : 2.0L * jc;
    if (k - 1 == nu) target = jc;
    // rescale to dodge overflow
    if (std::abs(jc) > 1e280L) {
      jc *= 1e-280L;
      jp *= 1e-280L;
      norm *= 1e-280L;
      target *= 1e-280L;
    }
  }
  return static_cast<double>(target / norm);
}

}  // namespace

double bessel_j(int nu, double x) {
  require(nu >= 0, ErrorCode::config, "bessel_j: order must be nonnegative");
  require(x >= 0.0 && std::isfinite(x), ErrorCode::config,
          "bessel_j: argument must be finite and nonnegative");
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  // the alternating series cancels catastrophically for large x
  if (x <= 12.0) return series_j(nu, x);
  return miller_j(nu, x);
}

double bessel_j_prime(int nu, double x) {
  if (nu == 0) return -bessel_j(1, x);
  if (x == 0.0) return nu == 1 ? 0.5 : 0.0;
  return 0.5 * (bessel_j(nu - 1, x) - bessel_j(nu + 1, x));
}

namespace {

double refine_root(int nu, double lo, double hi) {
  double flo = bessel_j(nu, lo);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = bessel_j(nu, mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    double f = bessel_j(nu, r);
    double fp = bessel_j_prime(nu, r);
    if (fp == 0.0) break;
    double step = f / fp;
    double next = r - step;
    if (next <= lo || next >= hi) break;
    r = next;
    if (std::abs(step) < 1e-15 * r) break;
  }
  return r;
}

// Roots of J_0 bracketed by scanning; spacing tends to pi so a 0.5 step
// cannot skip a sign change.
std::vector<double> roots_order0(int count) {
  std::vector<double> roots;
  roots.reserve(count);
  double x = 1.0, fx = bessel_j(0, x);
  while (static_cast<int>(roots.size()) < count) {
    double y = x + 0.5;
    double fy = bessel_j(0, y);
    if ((fx <= 0.0) != (fy <= 0.0)) roots.push_back(refine_root(0, x, y));
    x = y;
    fx = fy;
  }
  return roots;
}

}  // namespace

std::vector<double> bessel_roots(int nu, int count) {
  require(nu >= 0, ErrorCode::config, "bessel_roots: order must be nonnegative");
  require(count >= 1, ErrorCode::config, "bessel_roots: count must be positive");
  if (nu == 0) return roots_order0(count);
  // j_{nu-1,q} < j_{nu,q} < j_{nu-1,q+1}
  std::vector<double> prev = bessel_roots(nu - 1, count + 1);
  std::vector<double> roots;
  roots.reserve(count);
  for (int q = 0; q < count; ++q) {
    roots.push_back(refine_root(nu, prev[q], prev[q + 1]));
  }
  return roots;
}

}  // namespace mtd
