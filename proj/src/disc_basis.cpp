#include "mtd/disc_basis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "mtd/bessel.hpp"
#include "mtd/fft.hpp"

namespace mtd {

double CoeffVector::norm() const {
  double s = 0.0;
  for (const cd& z : v) s += std::norm(z);
  return std::sqrt(s);
}

namespace {

struct Level {
  int nu;  // nonnegative
  int q;
  double lambda;
};

// All levels (nu >= 0) with lambda <= cap, sorted by (lambda, nu).
std::vector<Level> levels_below(double cap) {
  std::vector<Level> out;
  for (int nu = 0;; ++nu) {
    // roots are increasing in q; stop the order scan once the first root
    // exceeds the cap (interlacing: lambda_{nu,1} increases with nu)
    std::vector<double> roots = bessel_roots(nu, 1);
    if (roots[0] > cap) break;
    int count = 4;
    while (true) {
      roots = bessel_roots(nu, count);
      if (roots.back() > cap) break;
      count *= 2;
    }
    for (int q = 1; q <= count; ++q) {
      if (roots[q - 1] <= cap) out.push_back({nu, q, roots[q - 1]});
    }
  }
  std::sort(out.begin(), out.end(), [](const Level& a, const Level& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.nu < b.nu;
  });
  return out;
}

void expand_signed(const std::vector<Level>& levels, DiscBasis& basis) {
  for (const Level& lv : levels) {
    basis.indices.push_back({lv.nu, lv.q, lv.lambda});
    if (lv.nu > 0) basis.indices.push_back({-lv.nu, lv.q, lv.lambda});
  }
  basis.d = static_cast<int>(basis.indices.size());
  basis.N = 0;
  basis.bandlimit = 0.0;
  for (const auto& ix : basis.indices) {
    basis.N = std::max(basis.N, std::abs(ix.nu));
    basis.bandlimit = std::max(basis.bandlimit, ix.lambda);
  }
}

void sample_columns(DiscBasis& basis) {
  const int n = basis.n, L = basis.grid();
  basis.psi.assign(basis.d, {});
  basis.psi_hat.assign(basis.d, {});
  basis.raw_norm.assign(basis.d, 0.0);
  for (int j = 0; j < basis.d; ++j) {
    const BasisIndex& ix = basis.indices[j];
    if (ix.nu < 0) continue;  // filled from the +nu partner below
    std::vector<cd> col(basis.npix(), cd(0.0, 0.0));
    for (int x0 = -n + 1; x0 < n; ++x0) {
      for (int x1 = -n + 1; x1 < n; ++x1) {
        double r2 = static_cast<double>(x0) * x0 + static_cast<double>(x1) * x1;
        if (r2 >= static_cast<double>(n) * n) continue;  // open disc
        double r = std::sqrt(r2) / n;
        double theta = std::atan2(static_cast<double>(x1), static_cast<double>(x0));
        double radial = bessel_j(ix.nu, ix.lambda * r);
        col[static_cast<size_t>(x0 + 2 * n) * L + (x1 + 2 * n)] =
            radial * std::polar(1.0, ix.nu * theta);
      }
    }
    double norm2 = 0.0;
    for (const cd& z : col) norm2 += std::norm(z);
    double norm = std::sqrt(norm2);
    for (cd& z : col) z /= norm;
    basis.raw_norm[j] = norm;
    basis.psi_hat[j] = fftops::dft_signed_2d(col, n);
    basis.psi[j] = std::move(col);
  }
  // psi_{-nu,q} = (-1)^nu conj(psi_{nu,q}) pointwise; same norm.
  for (int j = 0; j < basis.d; ++j) {
    const BasisIndex& ix = basis.indices[j];
    if (ix.nu >= 0) continue;
    int partner = -1;
    for (int k = 0; k < basis.d; ++k) {
      if (basis.indices[k].nu == -ix.nu && basis.indices[k].q == ix.q) {
        partner = k;
        break;
      }
    }
    require(partner >= 0, ErrorCode::config, "basis: missing conjugate partner");
    double sign = (std::abs(ix.nu) % 2 == 0) ? 1.0 : -1.0;
    basis.raw_norm[j] = basis.raw_norm[partner];
    std::vector<cd> col(basis.npix());
    for (size_t i = 0; i < col.size(); ++i) col[i] = sign * std::conj(basis.psi[partner][i]);
    basis.psi_hat[j] = fftops::dft_signed_2d(col, basis.n);
    basis.psi[j] = std::move(col);
  }
}

}  // namespace

DiscBasis build_basis_bandlimit(int n, double lambda) {
  require(n > 0, ErrorCode::config, "build_basis: n must be positive");
  require(lambda > 0.0, ErrorCode::config, "build_basis: lambda must be positive");
  DiscBasis basis;
  basis.n = n;
  expand_signed(levels_below(lambda), basis);
  require(basis.d >= 1, ErrorCode::config, "build_basis: bandlimit below lambda_{0,1}");
  sample_columns(basis);
  return basis;
}

DiscBasis build_basis(int n, int d) {
  require(n > 0, ErrorCode::config, "build_basis: n must be positive");
  require(d >= 1, ErrorCode::config, "build_basis: d must be positive");
  // Grow the cap until the signed count reaches d.
  double cap = 3.0 + 2.0 * std::sqrt(static_cast<double>(d));
  std::vector<Level> levels;
  while (true) {
    levels = levels_below(cap);
    int signed_count = 0;
    for (const Level& lv : levels) signed_count += lv.nu == 0 ? 1 : 2;
    if (signed_count >= d + 2) break;
    cap *= 1.4;
  }
  std::vector<Level> chosen;
  int taken = 0;
  for (size_t i = 0; i < levels.size() && taken < d; ++i) {
    int size = levels[i].nu == 0 ? 1 : 2;
    if (taken + size <= d) {
      chosen.push_back(levels[i]);
      taken += size;
    } else {
      // one slot left but the next level is a pair: take the next nu=0
      // entry instead so pairs stay together
      for (size_t k = i + 1; k < levels.size(); ++k) {
        if (levels[k].nu == 0) {
          chosen.push_back(levels[k]);
          ++taken;
          break;
        }
      }
      break;
    }
  }
  DiscBasis basis;
  basis.n = n;
  expand_signed(chosen, basis);
  // restore the global ordering after any substitution
  std::sort(basis.indices.begin(), basis.indices.end(),
            [](const BasisIndex& a, const BasisIndex& b) {
              if (a.lambda != b.lambda) return a.lambda < b.lambda;
              if (std::abs(a.nu) != std::abs(b.nu)) return std::abs(a.nu) < std::abs(b.nu);
              return a.nu > b.nu;
            });
  sample_columns(basis);
  return basis;
}

bool satisfies_real_constraint(const CoeffVector& v, const DiscBasis& basis, double tol) {
  require(static_cast<int>(v.v.size()) == basis.d, ErrorCode::config,
          "coefficient vector length differs from basis");
  double scale = std::max(v.norm(), 1e-300);
  for (int j = 0; j < basis.d; ++j) {
    const BasisIndex& ix = basis.indices[j];
    if (ix.nu < 0) continue;
    if (ix.nu == 0) {
      if (std::abs(v.v[j].imag()) > tol * scale) return false;
      continue;
    }
    for (int k = 0; k < basis.d; ++k) {
      if (basis.indices[k].nu == -ix.nu && basis.indices[k].q == ix.q) {
        double sign = (ix.nu % 2 == 0) ? 1.0 : -1.0;
        if (std::abs(v.v[k] - sign * std::conj(v.v[j])) > tol * scale) return false;
        break;
      }
    }
  }
  return true;
}

CoeffVector impose_real_constraint(const CoeffVector& v, const DiscBasis& basis) {
  CoeffVector out = v;
  for (int j = 0; j < basis.d; ++j) {
    const BasisIndex& ix = basis.indices[j];
    if (ix.nu < 0) continue;
    if (ix.nu == 0) {
      out.v[j] = cd(v.v[j].real(), 0.0);
      continue;
    }
    for (int k = 0; k < basis.d; ++k) {
      if (basis.indices[k].nu == -ix.nu && basis.indices[k].q == ix.q) {
        double sign = (ix.nu % 2 == 0) ? 1.0 : -1.0;
        cd avg = 0.5 * (v.v[j] + sign * std::conj(v.v[k]));
        out.v[j] = avg;
        out.v[k] = sign * std::conj(avg);
        break;
      }
    }
  }
  return out;
}

CoeffVector random_real_coeffs(const DiscBasis& basis, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CoeffVector v;
  v.v.resize(basis.d);
  for (auto& z : v.v) z = cd(gauss(rng), gauss(rng));
  v = impose_real_constraint(v, basis);
  double norm = v.norm();
  for (auto& z : v.v) z /= norm;
  return v;
}

CoeffVector steer(const CoeffVector& v, double phi, const DiscBasis& basis) {
  require(static_cast<int>(v.v.size()) == basis.d, ErrorCode::config,
          "steer: coefficient vector length differs from basis");
  CoeffVector out = v;
  for (int j = 0; j < basis.d; ++j) {
    out.v[j] *= std::polar(1.0, basis.indices[j].nu * phi);
  }
  return out;
}

std::vector<cd> render_complex(const CoeffVector& v, const DiscBasis& basis) {
  require(static_cast<int>(v.v.size()) == basis.d, ErrorCode::config,
          "render: coefficient vector length differs from basis");
  std::vector<cd> grid(basis.npix(), cd(0.0, 0.0));
  for (int j = 0; j < basis.d; ++j) {
    const cd c = v.v[j];
    if (c == cd(0.0, 0.0)) continue;
    const auto& col = basis.psi[j];
    for (size_t i = 0; i < grid.size(); ++i) grid[i] += c * col[i];
  }
  return grid;
}

std::vector<double> render_image(const CoeffVector& v, const DiscBasis& basis) {
  std::vector<cd> grid = render_complex(v, basis);
  double resid = 0.0;
  for (const cd& z : grid) resid = std::max(resid, std::abs(z.imag()));
  require(resid <= 1e-10 * std::max(v.norm(), 1e-300), ErrorCode::config,
          "render_image: coefficients violate the real-image constraint");
  std::vector<double> out(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) out[i] = grid[i].real();
  return out;
}

CoeffVector project(const std::vector<double>& grid, const DiscBasis& basis) {
  require(grid.size() == basis.npix(), ErrorCode::config,
          "project: grid size does not match basis");
  const int n = basis.n, L = basis.grid();
  // pixels inside the open disc
  std::vector<size_t> inside;
  for (int x0 = -n + 1; x0 < n; ++x0) {
    for (int x1 = -n + 1; x1 < n; ++x1) {
      if (static_cast<double>(x0) * x0 + static_cast<double>(x1) * x1 <
          static_cast<double>(n) * n) {
        inside.push_back(static_cast<size_t>(x0 + 2 * n) * L + (x1 + 2 * n));
      }
    }
  }
  require(static_cast<int>(inside.size()) >= basis.d, ErrorCode::config,
          "project: more basis functions than pixels (|V| must be O(n^2))");
  Eigen::MatrixXcd A(inside.size(), basis.d);
  Eigen::VectorXcd b(inside.size());
  for (size_t r = 0; r < inside.size(); ++r) {
    b(r) = grid[inside[r]];
    for (int j = 0; j < basis.d; ++j) A(r, j) = basis.psi[j][inside[r]];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
  qr.setThreshold(1e-10);
  require(qr.rank() == basis.d, ErrorCode::config,
          "project: rank-deficient Gram matrix (reduce d)");
  Eigen::VectorXcd x = qr.solve(b);
  CoeffVector out;
  out.v.assign(x.data(), x.data() + basis.d);
  return out;
}

cd eval_continuous(const CoeffVector& v, const DiscBasis& basis, double r,
                   double theta) {
  if (r >= 1.0) return cd(0.0, 0.0);
  cd sum(0.0, 0.0);
  for (int j = 0; j < basis.d; ++j) {
    const BasisIndex& ix = basis.indices[j];
    double radial = bessel_j(std::abs(ix.nu), ix.lambda * r);
    if (ix.nu < 0 && std::abs(ix.nu) % 2 == 1) radial = -radial;
    sum += v.v[j] / basis.raw_norm[j] * radial * std::polar(1.0, ix.nu * theta);
  }
  return sum;
}

}  // namespace mtd
