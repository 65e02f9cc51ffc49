#include <doctest.h>

#include <cmath>
#include <random>

#include "mtd/bessel.hpp"
#include "mtd/common.hpp"

using namespace mtd;

TEST_CASE("bessel_j reference values") {
  // Abramowitz & Stegun tables
  CHECK(bessel_j(0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bessel_j(1, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-13));
  CHECK(bessel_j(1, 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-13));
  CHECK(bessel_j(2, 1.0) == doctest::Approx(0.1149034849319005).epsilon(1e-13));
  CHECK(bessel_j(0, 10.0) ==
        doctest::Approx(-0.2459357644513483).epsilon(1e-12));
  CHECK(bessel_j(5, 10.0) ==
        doctest::Approx(-0.23406152818679364).epsilon(1e-12));
  CHECK(bessel_j(10, 1.0) ==
        doctest::Approx(2.6306151236874532e-10).epsilon(1e-10));
  CHECK(bessel_j(0, 50.0) ==
        doctest::Approx(0.05581232766925181).epsilon(1e-11));
}

TEST_CASE("three-term recurrence holds at random points") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> xs(0.1, 60.0);
  for (int trial = 0; trial < 200; ++trial) {
    double x = xs(rng);
    int nu = 1 + static_cast<int>(rng() % 20);
    double lhs = bessel_j(nu - 1, x) + bessel_j(nu + 1, x);
    double rhs = 2.0 * nu / x * bessel_j(nu, x);
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("bessel_j_prime matches finite differences") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> xs(0.5, 30.0);
  for (int trial = 0; trial < 50; ++trial) {
    double x = xs(rng);
    int nu = static_cast<int>(rng() % 8);
    double h = 1e-6;
    double fd = (bessel_j(nu, x + h) - bessel_j(nu, x - h)) / (2.0 * h);
    CHECK(bessel_j_prime(nu, x) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("roots of J0 and J1") {
  std::vector<double> r0 = bessel_roots(0, 3);
  CHECK(r0[0] == doctest::Approx(2.404825557695773).epsilon(1e-12));
  CHECK(r0[1] == doctest::Approx(5.520078110286311).epsilon(1e-12));
  CHECK(r0[2] == doctest::Approx(8.653727912911013).epsilon(1e-12));
  std::vector<double> r1 = bessel_roots(1, 2);
  CHECK(r1[0] == doctest::Approx(3.831705970207512).epsilon(1e-12));
  CHECK(r1[1] == doctest::Approx(7.015586669815619).epsilon(1e-12));
}

TEST_CASE("roots vanish and interlace up to order 12") {
  std::vector<double> prev;
  for (int nu = 0; nu <= 12; ++nu) {
    std::vector<double> r = bessel_roots(nu, 6);
    for (size_t q = 0; q < r.size(); ++q) {
      CHECK(std::abs(bessel_j(nu, r[q])) < 1e-11);
      if (q > 0) CHECK(r[q] > r[q - 1]);
      if (nu > 0 && q + 1 < prev.size()) {
        CHECK(r[q] > prev[q]);
        CHECK(r[q] < prev[q + 1]);
      }
    }
    prev = r;
  }
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(bessel_j(-1, 1.0), Error);
  CHECK_THROWS_AS(bessel_j(0, -1.0), Error);
  CHECK_THROWS_AS(bessel_roots(0, 0), Error);
}
