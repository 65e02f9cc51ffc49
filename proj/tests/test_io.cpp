#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "mtd/core_model.hpp"
#include "mtd/io.hpp"
#include "mtd/rng.hpp"

using namespace mtd;

namespace {

struct TempDir {
  std::filesystem::path p;
  TempDir() {
    p = std::filesystem::temp_directory_path() /
        ("mtd_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
  }
  ~TempDir() { std::filesystem::remove_all(p); }
  std::string file(const char* name) const { return (p / name).string(); }
};

}  // namespace

TEST_CASE("micrograph files round trip") {
  TempDir dir;
  MeasurementConfig cfg;
  cfg.dim = 1;
  cfg.m = 256;
  cfg.n = 4;
  cfg.p = 3;
  cfg.sigma = 0.7531;
  cfg.seed = 1234;
  std::mt19937_64 rng = make_stream(1, 0);
  std::normal_distribution<double> gauss;
  TargetSignal1D f(4, std::vector<double>(8));
  for (double& v : f.values) v = gauss(rng);
  auto [mic, pl] = synthesize_1d(cfg, f, 0);

  std::string path = dir.file("mic.bin");
  io::write_micrograph(path, mic, cfg);
  io::MicrographFile back = io::read_micrograph(path);
  CHECK(back.mic.dim == 1);
  CHECK(back.mic.m == cfg.m);
  CHECK(back.mic.pixels == mic.pixels);  // bit-exact
  CHECK(back.cfg.sigma == cfg.sigma);
  CHECK(back.cfg.seed == cfg.seed);
  CHECK(back.cfg.p == cfg.p);
  CHECK(back.cfg.n == cfg.n);
}

TEST_CASE("checkpoints round trip and resume accumulation") {
  TempDir dir;
  MeasurementConfig cfg;
  cfg.dim = 1;
  cfg.m = 256;
  cfg.n = 3;
  cfg.p = 3;
  cfg.sigma = 0.2;
  cfg.seed = 5;
  TargetSignal1D f(3, std::vector<double>(6, 1.0));
  auto [m1, p1] = synthesize_1d(cfg, f, 0);
  auto [m2, p2] = synthesize_1d(cfg, f, 1);

  MomentAccumulator acc = make_accumulator(1, cfg.m, cfg.n);
  absorb(acc, m1);
  std::string path = dir.file("acc.bin");
  io::write_checkpoint(path, acc);
  MomentAccumulator loaded = io::read_checkpoint(path);
  CHECK(loaded.count == acc.count);
  CHECK(loaded.sum_A == acc.sum_A);
  CHECK(loaded.sum_pix == acc.sum_pix);

  absorb(loaded, m2);
  MomentAccumulator serial = make_accumulator(1, cfg.m, cfg.n);
  absorb(serial, m1);
  absorb(serial, m2);
  CHECK(loaded.sum_A == serial.sum_A);
}

TEST_CASE("invariant files round trip dense and binned") {
  TempDir dir;
  io::InvariantHeader hdr;
  hdr.n = 4;
  hdr.d = 10;
  hdr.N = 3;
  hdr.b1 = 1.0;
  hdr.b2 = 6.0 / kPi;
  hdr.bins = 0;
  std::mt19937_64 rng = make_stream(2, 0);
  std::normal_distribution<double> gauss;
  std::vector<cd> data(97);
  for (cd& z : data) z = cd(gauss(rng), gauss(rng));

  std::string path = dir.file("inv.bin");
  io::write_invariants(path, hdr, data);
  auto [h2, d2] = io::read_invariants(path);
  CHECK(h2.n == hdr.n);
  CHECK(h2.d == hdr.d);
  CHECK(h2.N == hdr.N);
  CHECK(h2.b1 == hdr.b1);
  CHECK(h2.b2 == hdr.b2);
  CHECK(h2.bins == hdr.bins);
  CHECK(d2 == data);
}

TEST_CASE("basis cache round trips") {
  TempDir dir;
  DiscBasis basis = build_basis(4, 10);
  std::string path = dir.file("basis.bin");
  io::write_basis(path, basis);
  DiscBasis back = io::read_basis(path);
  CHECK(back.n == basis.n);
  CHECK(back.d == basis.d);
  CHECK(back.N == basis.N);
  CHECK(back.bandlimit == basis.bandlimit);
  for (int l = 0; l < basis.d; ++l) {
    CHECK(back.indices[l].nu == basis.indices[l].nu);
    CHECK(back.indices[l].q == basis.indices[l].q);
    CHECK(back.indices[l].lambda == basis.indices[l].lambda);
    CHECK(back.psi[l] == basis.psi[l]);
    CHECK(back.psi_hat[l] == basis.psi_hat[l]);
  }
  CHECK(back.raw_norm == basis.raw_norm);
}

TEST_CASE("flat arrays round trip") {
  TempDir dir;
  std::vector<double> data = {0.0, -1.5, 3.25, 1e-300, 1e300, 0.1};
  std::string path = dir.file("flat.bin");
  io::write_flat(path, data);
  CHECK(io::read_flat(path) == data);
}

TEST_CASE("read_spec parses configs") {
  TempDir dir;
  std::string path = dir.file("spec.json");
  {
    std::ofstream out(path);
    out << R"({"dim": 1, "m": 4096, "n": 8, "gamma": 0.1, "snr": 100.0,
               "seed": 42, "count": 12, "trials": 3,
               "counts": [1, 2, 4], "restarts": 2})";
  }
  io::ExperimentSpec spec = io::read_spec(path);
  CHECK(spec.cfg.dim == 1);
  CHECK(spec.cfg.m == 4096);
  CHECK(spec.cfg.n == 8);
  // gamma = p n / m  ->  p = gamma m / n
  CHECK(spec.cfg.p == 51);
  CHECK(spec.snr.has_value());
  CHECK(*spec.snr == 100.0);
  CHECK(spec.cfg.seed == 42);
  CHECK(spec.sim_count == 12);
  CHECK(spec.trials == 3);
  CHECK(spec.counts == std::vector<int64_t>{1, 2, 4});
  CHECK(spec.restarts == 2);

  {
    std::ofstream out(path);
    out << R"({"dim": 2, "m": 128, "n": 6, "p": 4, "sigma": 0.5,
               "seed": 7, "d": 30, "angles": 24})";
  }
  spec = io::read_spec(path);
  CHECK(spec.cfg.dim == 2);
  CHECK(spec.cfg.p == 4);
  CHECK(spec.cfg.sigma == 0.5);
  CHECK_FALSE(spec.snr.has_value());
  CHECK(spec.d == 30);
  CHECK(spec.angles == 24);
}

TEST_CASE("malformed inputs raise the right error codes") {
  TempDir dir;
  try {
    io::read_micrograph(dir.file("missing.bin"));
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
  try {
    io::read_spec(dir.file("missing.json"));
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }

  std::string bad = dir.file("bad.json");
  {
    std::ofstream out(bad);
    out << "{ not json";
  }
  try {
    io::read_spec(bad);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
  }

  // wrong magic
  std::string junk = dir.file("junk.bin");
  {
    std::ofstream out(junk);
    out << "NOTAFILE\n1\n2\n3\n";
  }
  try {
    io::read_micrograph(junk);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}
