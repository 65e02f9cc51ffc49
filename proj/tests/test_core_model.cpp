#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mtd/core_model.hpp"
#include "mtd/disc_basis.hpp"
#include "mtd/rng.hpp"

using namespace mtd;

namespace {

TargetSignal1D ramp(int n) {
  std::vector<double> v(2 * n);
  std::iota(v.begin(), v.end(), 1.0);
  return {n, std::move(v)};
}

}  // namespace

TEST_CASE("rotate1d basics") {
  TargetSignal1D f = ramp(4);
  TargetSignal1D same = rotate1d(f, 0);
  CHECK(same.values == f.values);
  TargetSignal1D r = rotate1d(f, 3);
  for (int x = -4; x < 4; ++x) {
    int idx = x + 3;
    if (idx >= 4) idx -= 8;
    if (idx < -4) idx += 8;
    CHECK(r.at(x) == f.at(idx));
  }
  // composition wraps mod 2n
  TargetSignal1D a = rotate1d(rotate1d(f, 3), 3);
  TargetSignal1D b = rotate1d(f, -2);  // 6 == -2 mod 8
  CHECK(a.values == b.values);
  CHECK_THROWS_AS(rotate1d(f, 4), Error);
  CHECK_THROWS_AS(rotate1d(f, -5), Error);
}

TEST_CASE("1D placement respects band and separation") {
  MeasurementConfig cfg;
  cfg.dim = 1;
  cfg.m = 4096;
  cfg.n = 8;
  cfg.p = 40;
  cfg.seed = 11;
  std::mt19937_64 rng = make_stream(cfg.seed, 0);
  std::vector<int> pos = place_targets_1d(cfg, rng);
  REQUIRE(static_cast<int>(pos.size()) == cfg.p);
  for (int x : pos) {
    CHECK(x >= cfg.n + 1);
    CHECK(x <= cfg.m - cfg.n + 1);
  }
  for (size_t i = 0; i < pos.size(); ++i) {
    for (size_t j = i + 1; j < pos.size(); ++j) {
      int dx = std::abs(pos[i] - pos[j]);
      CHECK(dx >= 4 * cfg.n);
      CHECK(cfg.m - dx > 4 * cfg.n);
    }
  }
}

TEST_CASE("infeasible 1D placement raises the placement error") {
  MeasurementConfig cfg;
  cfg.dim = 1;
  cfg.m = 80;
  cfg.n = 10;
  cfg.p = 2;  // periodic separation needs dx >= 40 and dx < 40 at once
  std::mt19937_64 rng = make_stream(1, 0);
  try {
    place_targets_1d(cfg, rng);
    FAIL("expected placement failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::placement);
  }
}

TEST_CASE("2D placement respects band and Euclidean separation") {
  MeasurementConfig cfg;
  cfg.dim = 2;
  cfg.m = 256;
  cfg.n = 6;
  cfg.p = 30;
  std::mt19937_64 rng = make_stream(5, 0);
  auto pos = place_targets_2d(cfg, rng);
  REQUIRE(static_cast<int>(pos.size()) == cfg.p);
  for (auto [x, y] : pos) {
    CHECK(x >= cfg.n + 1);
    CHECK(x <= cfg.m - cfg.n);
    CHECK(y >= cfg.n + 1);
    CHECK(y <= cfg.m - cfg.n);
  }
  for (size_t i = 0; i < pos.size(); ++i) {
    for (size_t j = i + 1; j < pos.size(); ++j) {
      double dx = pos[i].first - pos[j].first;
      double dy = pos[i].second - pos[j].second;
      CHECK(dx * dx + dy * dy >= 16.0 * cfg.n * cfg.n);
    }
  }
}

TEST_CASE("synthesize_1d is deterministic and additive at sigma=0") {
  MeasurementConfig cfg;
  cfg.dim = 1;
  cfg.m = 2048;
  cfg.n = 4;
  cfg.p = 20;
  cfg.sigma = 0.0;
  cfg.seed = 99;
  TargetSignal1D f = ramp(4);
  auto [mic1, pl1] = synthesize_1d(cfg, f, 3);
  auto [mic2, pl2] = synthesize_1d(cfg, f, 3);
  CHECK(mic1.pixels == mic2.pixels);
  auto [mic3, pl3] = synthesize_1d(cfg, f, 4);
  CHECK(mic1.pixels != mic3.pixels);

  double total = std::accumulate(mic1.pixels.begin(), mic1.pixels.end(), 0.0);
  double ftotal = std::accumulate(f.values.begin(), f.values.end(), 0.0);
  CHECK(total == doctest::Approx(cfg.p * ftotal).epsilon(1e-12));
  // each copy is a cyclic rotation of F at its reported position
  for (size_t j = 0; j < pl1.positions.size(); ++j) {
    TargetSignal1D ft = rotate1d(f, pl1.shifts[j]);
    for (int x = -cfg.n; x < cfg.n; ++x) {
      int px = pl1.positions[j] + x - 1;  // pixels are 1-based in the model
      CHECK(mic1.pixels[static_cast<size_t>(px)] ==
            doctest::Approx(ft.at(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("noise level matches sigma") {
  MeasurementConfig cfg;
  cfg.dim = 1;
  cfg.m = 1 << 16;
  cfg.n = 4;
  cfg.p = 0;
  cfg.sigma = 1.5;
  cfg.seed = 7;
  TargetSignal1D f(4, std::vector<double>(8, 0.0));
  auto [mic, pl] = synthesize_1d(cfg, f, 0);
  double s2 = 0.0;
  for (double v : mic.pixels) s2 += v * v;
  s2 /= mic.pixels.size();
  CHECK(s2 == doctest::Approx(cfg.sigma * cfg.sigma).epsilon(0.05));
}

TEST_CASE("SNR round trips") {
  TargetSignal1D f = ramp(5);
  double sigma = sigma_for_snr_1d(f, 100.0);
  CHECK(snr_1d(f, sigma) == doctest::Approx(100.0).epsilon(1e-12));

  DiscBasis basis = build_basis(4, 6);
  std::mt19937_64 rng = make_stream(2, 0);
  CoeffVector v = random_real_coeffs(basis, rng);
  std::vector<double> img = render_image(v, basis);
  double s2 = sigma_for_snr_2d(img, basis.n, 100.0);
  CHECK(snr_2d(img, basis.n, s2) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("synthesize_2d determinism and placement") {
  MeasurementConfig cfg;
  cfg.dim = 2;
  cfg.m = 128;
  cfg.n = 4;
  cfg.p = 8;
  cfg.sigma = 0.0;
  cfg.seed = 12;
  DiscBasis basis = build_basis(cfg.n, 8);
  std::mt19937_64 rng = make_stream(3, 0);
  CoeffVector v = random_real_coeffs(basis, rng);
  auto [mic1, pl1] = synthesize_2d(cfg, v, basis, 0);
  auto [mic2, pl2] = synthesize_2d(cfg, v, basis, 0);
  CHECK(mic1.pixels == mic2.pixels);
  CHECK(pl1.positions.size() == static_cast<size_t>(cfg.p));
  double peak = 0.0;
  for (double px : mic1.pixels) peak = std::max(peak, std::abs(px));
  CHECK(peak > 0.0);
}

TEST_CASE("config validation") {
  MeasurementConfig cfg;
  cfg.dim = 1;
  cfg.m = 100;
  cfg.n = 4;
  cfg.p = 2;
  CHECK_NOTHROW(cfg.validate());
  cfg.p = 7;  // 7*16 > 100
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.p = 2;
  cfg.m = 31;  // below 8n
  CHECK_THROWS_AS(cfg.validate(), Error);
}
