#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mtd/common.hpp"

namespace mtd {

// Real signal F supported on {-n,...,n-1}; values[x + n] holds F(x).
struct TargetSignal1D {
  int n = 0;
  std::vector<double> values;

  TargetSignal1D() = default;
  TargetSignal1D(int half_support, std::vector<double> v)
      : n(half_support), values(std::move(v)) {
    require(n > 0, ErrorCode::config, "TargetSignal1D: n must be positive");
    require(static_cast<int>(values.size()) == 2 * n, ErrorCode::config,
            "TargetSignal1D: values must have length 2n");
  }

  // Zero outside the support.
  double at(int x) const {
    return (x < -n || x >= n) ? 0.0 : values[static_cast<size_t>(x + n)];
  }
  double& ref(int x) { return values[static_cast<size_t>(x + n)]; }
};

struct Placement1D {
  std::vector<int> shifts;     // tau_j in {-n,...,n-1}
  std::vector<int> positions;  // x_j in {n+1,...,m-n+1}
};

struct Placement2D {
  std::vector<double> angles;            // phi_j in [0, 2pi)
  std::vector<std::pair<int, int>> positions;  // x_j in {n+1,...,m-n}^2
};

struct MeasurementConfig {
  int dim = 1;
  int m = 0;       // measurement side length
  int n = 0;       // target radius
  int p = 0;       // copy count
  double sigma = 0.0;
  uint64_t seed = 0;

  double gamma() const {
    return dim == 1 ? static_cast<double>(n) * p / m
                    : static_cast<double>(p) * n * n / (static_cast<double>(m) * m);
  }

  // p derived from density: p = round(gamma*m/n) in 1D, round(gamma*m^2/n^2) in 2D.
  static int copies_for_density(int dim, int m, int n, double gamma) {
    double p = dim == 1 ? gamma * m / n : gamma * m * static_cast<double>(m) / (n * static_cast<double>(n));
    return static_cast<int>(std::llround(p));
  }

  void validate() const {
    require(dim == 1 || dim == 2, ErrorCode::config, "config: dim must be 1 or 2");
    require(n > 0, ErrorCode::config, "config: n must be positive");
    require(m >= 8 * n, ErrorCode::config, "config: m must be at least 8n");
    require(p >= 0, ErrorCode::config, "config: p must be nonnegative");
    require(sigma >= 0.0, ErrorCode::config, "config: sigma must be nonnegative");
    double cells = std::pow(4.0 * n, dim) * p;
    double volume = std::pow(static_cast<double>(m), dim);
    require(cells <= volume, ErrorCode::config,
            "config: p*(4n)^dim exceeds m^dim, separation infeasible");
  }
};

// 1D: pixels has length m (x in {1,...,m} stored at x-1).
// 2D: pixels has length m*m, row-major.
struct Micrograph {
  int dim = 1;
  int m = 0;
  std::vector<double> pixels;

  void validate() const {
    size_t expect = dim == 1 ? static_cast<size_t>(m)
                             : static_cast<size_t>(m) * m;
    require(pixels.size() == expect, ErrorCode::config,
            "Micrograph: pixel count does not match m");
  }
};

}  // namespace mtd
