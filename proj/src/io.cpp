#include "mtd/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mtd::io {

namespace {

// Raw float64 blocks are written in host order; the tool targets
// little-endian platforms only (checked at startup by the CLI selftest).

void write_doubles(std::ofstream& os, const double* data, size_t count) {
  os.write(reinterpret_cast<const char*>(data),
           static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::ifstream& is, double* data, size_t count,
                  const std::string& path) {
  is.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(count * sizeof(double)));
  require(static_cast<size_t>(is.gcount()) == count * sizeof(double),
          ErrorCode::io, "truncated data block in " + path);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), ErrorCode::io, "cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorCode::io, "cannot open for reading: " + path);
  return is;
}

std::string next_line(std::ifstream& is, const std::string& path) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::io,
          "truncated header in " + path);
  return line;
}

}  // namespace

void write_micrograph(const std::string& path, const Micrograph& mic,
                      const MeasurementConfig& cfg) {
  mic.validate();
  std::ofstream os = open_out(path);
  os << "MTDMICRO1\n"
     << mic.dim << "\n"
     << mic.m << "\n"
     << cfg.n << "\n"
     << std::hexfloat << cfg.sigma << std::defaultfloat << "\n"
     << cfg.seed << "\n"
     << cfg.p << "\n"
     << "-\n";
  write_doubles(os, mic.pixels.data(), mic.pixels.size());
  require(os.good(), ErrorCode::io, "write failed: " + path);
}

MicrographFile read_micrograph(const std::string& path) {
  std::ifstream is = open_in(path);
  require(next_line(is, path) == "MTDMICRO1", ErrorCode::io,
          "bad micrograph magic in " + path);
  MicrographFile out;
  out.mic.dim = std::stoi(next_line(is, path));
  out.mic.m = std::stoi(next_line(is, path));
  out.cfg.dim = out.mic.dim;
  out.cfg.m = out.mic.m;
  out.cfg.n = std::stoi(next_line(is, path));
  out.cfg.sigma = std::strtod(next_line(is, path).c_str(), nullptr);
  out.cfg.seed = std::stoull(next_line(is, path));
  out.cfg.p = std::stoi(next_line(is, path));
  next_line(is, path);  // reserved
  size_t count = out.mic.dim == 1 ? static_cast<size_t>(out.mic.m)
                                  : static_cast<size_t>(out.mic.m) * out.mic.m;
  out.mic.pixels.resize(count);
  read_doubles(is, out.mic.pixels.data(), count, path);
  return out;
}

void write_checkpoint(const std::string& path, const MomentAccumulator& acc) {
  std::ofstream os = open_out(path);
  os << "MTDACC1\n"
     << acc.dim << "\n"
     << acc.m << "\n"
     << acc.n << "\n"
     << acc.count << "\n"
     << std::hexfloat << acc.sum_pix << "\n"
     << acc.sum_pix2 << std::defaultfloat << "\n"
     << acc.pixel_count << "\n";
  write_doubles(os, acc.sum_A.data(), acc.sum_A.size());
  require(os.good(), ErrorCode::io, "write failed: " + path);
}

MomentAccumulator read_checkpoint(const std::string& path) {
  std::ifstream is = open_in(path);
  require(next_line(is, path) == "MTDACC1", ErrorCode::io,
          "bad checkpoint magic in " + path);
  int dim = std::stoi(next_line(is, path));
  int m = std::stoi(next_line(is, path));
  int n = std::stoi(next_line(is, path));
  MomentAccumulator acc = make_accumulator(dim, m, n);
  acc.count = std::stoll(next_line(is, path));
  acc.sum_pix = std::strtod(next_line(is, path).c_str(), nullptr);
  acc.sum_pix2 = std::strtod(next_line(is, path).c_str(), nullptr);
  acc.pixel_count = std::stoll(next_line(is, path));
  read_doubles(is, acc.sum_A.data(), acc.sum_A.size(), path);
  return acc;
}

void write_invariants(const std::string& path, const InvariantHeader& hdr,
                      const std::vector<cd>& data) {
  std::ofstream os = open_out(path);
  os << "MTDINV1\n"
     << hdr.n << "\n"
     << hdr.d << "\n"
     << hdr.N << "\n"
     << std::hexfloat << hdr.b1 << "\n"
     << hdr.b2 << std::defaultfloat << "\n"
     << hdr.bins << "\n"
     << data.size() << "\n";
  write_doubles(os, reinterpret_cast<const double*>(data.data()),
                data.size() * 2);
  require(os.good(), ErrorCode::io, "write failed: " + path);
}

std::pair<InvariantHeader, std::vector<cd>> read_invariants(
    const std::string& path) {
  std::ifstream is = open_in(path);
  require(next_line(is, path) == "MTDINV1", ErrorCode::io,
          "bad invariant-file magic in " + path);
  InvariantHeader hdr;
  hdr.n = std::stoi(next_line(is, path));
  hdr.d = std::stoi(next_line(is, path));
  hdr.N = std::stoi(next_line(is, path));
  hdr.b1 = std::strtod(next_line(is, path).c_str(), nullptr);
  hdr.b2 = std::strtod(next_line(is, path).c_str(), nullptr);
  hdr.bins = std::stoll(next_line(is, path));
  size_t count = std::stoull(next_line(is, path));
  std::vector<cd> data(count);
  read_doubles(is, reinterpret_cast<double*>(data.data()), count * 2, path);
  return {hdr, std::move(data)};
}

void write_basis(const std::string& path, const DiscBasis& basis) {
  std::ofstream os = open_out(path);
  os << "MTDBASIS1\n"
     << basis.n << "\n"
     << std::hexfloat << basis.bandlimit << std::defaultfloat << "\n"
     << basis.d << "\n"
     << basis.N << "\n";
  for (const BasisIndex& bi : basis.indices) {
    os << bi.nu << " " << bi.q << " " << std::hexfloat << bi.lambda
       << std::defaultfloat << "\n";
  }
  write_doubles(os, basis.raw_norm.data(), basis.raw_norm.size());
  for (int l = 0; l < basis.d; ++l) {
    write_doubles(os, reinterpret_cast<const double*>(basis.psi[l].data()),
                  basis.npix() * 2);
    write_doubles(os, reinterpret_cast<const double*>(basis.psi_hat[l].data()),
                  basis.npix() * 2);
  }
  require(os.good(), ErrorCode::io, "write failed: " + path);
}

DiscBasis read_basis(const std::string& path) {
  std::ifstream is = open_in(path);
  require(next_line(is, path) == "MTDBASIS1", ErrorCode::io,
          "bad basis magic in " + path);
  DiscBasis basis;
  basis.n = std::stoi(next_line(is, path));
  basis.bandlimit = std::strtod(next_line(is, path).c_str(), nullptr);
  basis.d = std::stoi(next_line(is, path));
  basis.N = std::stoi(next_line(is, path));
  basis.indices.resize(basis.d);
  for (BasisIndex& bi : basis.indices) {
    std::istringstream row(next_line(is, path));
    std::string lam;  // hexfloat: istream extraction cannot parse it
    require(static_cast<bool>(row >> bi.nu >> bi.q >> lam), ErrorCode::io,
            "bad basis index row in " + path);
    bi.lambda = std::strtod(lam.c_str(), nullptr);
  }
  basis.raw_norm.resize(basis.d);
  read_doubles(is, basis.raw_norm.data(), basis.raw_norm.size(), path);
  basis.psi.assign(basis.d, std::vector<cd>(basis.npix()));
  basis.psi_hat.assign(basis.d, std::vector<cd>(basis.npix()));
  for (int l = 0; l < basis.d; ++l) {
    read_doubles(is, reinterpret_cast<double*>(basis.psi[l].data()),
                 basis.npix() * 2, path);
    read_doubles(is, reinterpret_cast<double*>(basis.psi_hat[l].data()),
                 basis.npix() * 2, path);
  }
  return basis;
}

void write_flat(const std::string& path, const std::vector<double>& data) {
  std::ofstream os = open_out(path);
  os << "MTDFLAT1\n" << data.size() << "\n";
  write_doubles(os, data.data(), data.size());
  require(os.good(), ErrorCode::io, "write failed: " + path);
}

std::vector<double> read_flat(const std::string& path) {
  std::ifstream is = open_in(path);
  require(next_line(is, path) == "MTDFLAT1", ErrorCode::io,
          "bad flat-array magic in " + path);
  size_t count = std::stoull(next_line(is, path));
  std::vector<double> data(count);
  read_doubles(is, data.data(), count, path);
  return data;
}

ExperimentSpec read_spec(const std::string& path) {
  std::ifstream is = open_in(path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::config, std::string("invalid JSON in ") + path + ": " + e.what());
  }
  ExperimentSpec spec;
  try {
    spec.cfg.dim = j.at("dim").get<int>();
    spec.cfg.m = j.at("m").get<int>();
    spec.cfg.n = j.at("n").get<int>();
    if (j.contains("p")) {
      spec.cfg.p = j.at("p").get<int>();
    } else if (j.contains("gamma")) {
      spec.cfg.p = MeasurementConfig::copies_for_density(
          spec.cfg.dim, spec.cfg.m, spec.cfg.n, j.at("gamma").get<double>());
    } else {
      fail(ErrorCode::config, "spec needs either \"p\" or \"gamma\"");
    }
    if (j.contains("snr")) {
      spec.snr = j.at("snr").get<double>();
    } else {
      spec.cfg.sigma = j.value("sigma", 0.0);
    }
    spec.cfg.seed = j.value("seed", 0ULL);
    spec.d = j.value("d", 0);
    spec.b1 = j.value("b1", 1.0);
    spec.b2 = j.value("b2", 0.0);
    spec.angles = j.value("angles", 0);
    if (j.contains("counts")) {
      spec.counts = j.at("counts").get<std::vector<int64_t>>();
    }
    spec.sim_count = j.value("count", static_cast<int64_t>(1));
    spec.trials = j.value("trials", 10);
    spec.max_iters = j.value("max_iters", 5000);
    spec.grad_tol = j.value("grad_tol", 1e-9);
    spec.restarts = j.value("restarts", 5);
    spec.ls_phases = j.value("ls_phases", false);
    spec.sigma_from_pixels = j.value("sigma_from_pixels", false);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::config, std::string("bad config field in ") + path + ": " + e.what());
  }
  spec.cfg.validate();
  return spec;
}

}  // namespace mtd::io
