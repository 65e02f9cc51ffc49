#include "mtd/core_model.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "mtd/disc_basis.hpp"
#include "mtd/rng.hpp"

namespace mtd {

namespace {

// Stream roles per micrograph index, so placement/shift/noise draws stay
// independent and micrographs can be generated out of order.
enum Stream : uint64_t { kPlace = 0, kShift = 1, kNoise = 2 };

uint64_t stream_id(uint64_t index, Stream role) { return index * 4 + role; }

}  // namespace

TargetSignal1D rotate1d(const TargetSignal1D& f, int tau) {
  require(tau >= -f.n && tau < f.n, ErrorCode::config,
          "rotate1d: tau out of {-n,...,n-1}");
  TargetSignal1D out(f.n, std::vector<double>(2 * f.n, 0.0));
  for (int x = -f.n; x < f.n; ++x) {
    int src = x + tau;
    if (src >= f.n) src -= 2 * f.n;
    if (src < -f.n) src += 2 * f.n;
    out.ref(x) = f.at(src);
  }
  return out;
}

std::vector<int> place_targets_1d(const MeasurementConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const int n = cfg.n, m = cfg.m, p = cfg.p;
  std::vector<int> positions;
  positions.reserve(p);
  if (p == 0) return positions;
  std::uniform_int_distribution<int> band(n + 1, m - n + 1);
  long budget = 1000L * p;
  while (static_cast<int>(positions.size()) < p && budget-- > 0) {
    int x = band(rng);
    bool ok = true;
    for (int y : positions) {
      int dx = std::abs(x - y);
      if (dx < 4 * n || m - dx <= 4 * n) {  // separation, plus its periodic variant
        ok = false;
        break;
      }
    }
    if (ok) positions.push_back(x);
  }
  if (static_cast<int>(positions.size()) < p) {
    fail(ErrorCode::placement,
         "placement failed: placed " + std::to_string(positions.size()) + " of " +
             std::to_string(p) + " copies within the attempt budget");
  }
  return positions;
}

std::vector<std::pair<int, int>> place_targets_2d(const MeasurementConfig& cfg,
                                                  std::mt19937_64& rng) {
  cfg.validate();
  const int n = cfg.n, m = cfg.m, p = cfg.p;
  std::vector<std::pair<int, int>> positions;
  positions.reserve(p);
  if (p == 0) return positions;
  std::uniform_int_distribution<int> band(n + 1, m - n);
  const long sep2 = 16L * n * n;
  long budget = 1000L * p;
  while (static_cast<int>(positions.size()) < p && budget-- > 0) {
    int x = band(rng), y = band(rng);
    bool ok = true;
    for (auto [qx, qy] : positions) {
      long dx = x - qx, dy = y - qy;
      if (dx * dx + dy * dy < sep2) {
        ok = false;
        break;
      }
    }
    if (ok) positions.emplace_back(x, y);
  }
  if (static_cast<int>(positions.size()) < p) {
    fail(ErrorCode::placement,
         "placement failed: placed " + std::to_string(positions.size()) + " of " +
             std::to_string(p) + " copies within the attempt budget");
  }
  return positions;
}

std::pair<Micrograph, Placement1D> synthesize_1d(const MeasurementConfig& cfg,
                                                 const TargetSignal1D& f,
                                                 uint64_t index) {
  cfg.validate();
  require(cfg.dim == 1, ErrorCode::config, "synthesize_1d: config dim must be 1");
  require(f.n == cfg.n, ErrorCode::config, "synthesize_1d: signal n differs from config");

  auto place_rng = make_stream(cfg.seed, stream_id(index, kPlace));
  auto shift_rng = make_stream(cfg.seed, stream_id(index, kShift));
  auto noise_rng = make_stream(cfg.seed, stream_id(index, kNoise));

  Placement1D placement;
  placement.positions = place_targets_1d(cfg, place_rng);
  std::uniform_int_distribution<int> shift(-cfg.n, cfg.n - 1);
  placement.shifts.reserve(cfg.p);
  for (int j = 0; j < cfg.p; ++j) placement.shifts.push_back(shift(shift_rng));

  Micrograph out;
  out.dim = 1;
  out.m = cfg.m;
  out.pixels.assign(cfg.m, 0.0);
  for (int j = 0; j < cfg.p; ++j) {
    TargetSignal1D copy = rotate1d(f, placement.shifts[j]);
    int xj = placement.positions[j];
    for (int t = -cfg.n; t < cfg.n; ++t) {
      out.pixels[static_cast<size_t>(xj + t - 1)] += copy.at(t);
    }
  }
  if (cfg.sigma > 0.0) {
    std::normal_distribution<double> gauss(0.0, cfg.sigma);
    for (auto& px : out.pixels) px += gauss(noise_rng);
  }
  return {std::move(out), std::move(placement)};
}

std::pair<Micrograph, Placement2D> synthesize_2d(const MeasurementConfig& cfg,
                                                 const CoeffVector& v,
                                                 const DiscBasis& basis,
                                                 uint64_t index) {
  cfg.validate();
  require(cfg.dim == 2, ErrorCode::config, "synthesize_2d: config dim must be 2");
  require(basis.n == cfg.n, ErrorCode::config, "synthesize_2d: basis n differs from config");

  auto place_rng = make_stream(cfg.seed, stream_id(index, kPlace));
  auto angle_rng = make_stream(cfg.seed, stream_id(index, kShift));
  auto noise_rng = make_stream(cfg.seed, stream_id(index, kNoise));

  Placement2D placement;
  placement.positions = place_targets_2d(cfg, place_rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  placement.angles.reserve(cfg.p);
  for (int j = 0; j < cfg.p; ++j) placement.angles.push_back(angle(angle_rng));

  const int n = cfg.n, m = cfg.m, L = 4 * n;
  Micrograph out;
  out.dim = 2;
  out.m = m;
  out.pixels.assign(static_cast<size_t>(m) * m, 0.0);
  for (int j = 0; j < cfg.p; ++j) {
    std::vector<double> window = render_image(steer(v, placement.angles[j], basis), basis);
    auto [xj, yj] = placement.positions[j];
    // window lives on the signed 4n grid but is supported on |t| < n
    for (int tx = -n + 1; tx < n; ++tx) {
      for (int ty = -n + 1; ty < n; ++ty) {
        double w = window[static_cast<size_t>(tx + 2 * n) * L + (ty + 2 * n)];
        if (w == 0.0) continue;
        out.pixels[static_cast<size_t>(xj + tx - 1) * m + (yj + ty - 1)] += w;
      }
    }
  }
  if (cfg.sigma > 0.0) {
    std::normal_distribution<double> gauss(0.0, cfg.sigma);
    for (auto& px : out.pixels) px += gauss(noise_rng);
  }
  return {std::move(out), std::move(placement)};
}

double snr_1d(const TargetSignal1D& f, double sigma) {
  double energy = 0.0;
  for (double x : f.values) energy += x * x;
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  return energy / (2.0 * f.n * sigma * sigma);
}

double snr_2d(const std::vector<double>& grid, int n, double sigma) {
  double energy = 0.0;
  for (double x : grid) energy += x * x;
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  return energy / (kPi * n * n * sigma * sigma);
}

double sigma_for_snr_1d(const TargetSignal1D& f, double snr) {
  require(snr > 0.0, ErrorCode::config, "sigma_for_snr: snr must be positive");
  double energy = 0.0;
  for (double x : f.values) energy += x * x;
  return std::sqrt(energy / (2.0 * f.n * snr));
}

double sigma_for_snr_2d(const std::vector<double>& grid, int n, double snr) {
  require(snr > 0.0, ErrorCode::config, "sigma_for_snr: snr must be positive");
  double energy = 0.0;
  for (double x : grid) energy += x * x;
  return std::sqrt(energy / (kPi * n * n * snr));
}

}  // namespace mtd
