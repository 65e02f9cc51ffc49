#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtd/disc_basis.hpp"
#include "mtd/estimate.hpp"
#include "mtd/types.hpp"

namespace mtd::io {

// Micrograph container: 8-line text header (magic, dim, m, n, sigma, seed,
// count, reserved) followed by the pixels as little-endian float64.
void write_micrograph(const std::string& path, const Micrograph& mic,
                      const MeasurementConfig& cfg);
struct MicrographFile {
  Micrograph mic;
  MeasurementConfig cfg;
};
MicrographFile read_micrograph(const std::string& path);

// Accumulator checkpoint (resumable runs).
void write_checkpoint(const std::string& path, const MomentAccumulator& acc);
MomentAccumulator read_checkpoint(const std::string& path);

// Invariant tensors / binned vectors: header (n, d, N, b1, b2, bin count)
// plus interleaved re/im float64.
struct InvariantHeader {
  int n = 0, d = 0, N = 0;
  double b1 = 0.0, b2 = 0.0;
  int64_t bins = 0;  // 0 for dense tensors
};
void write_invariants(const std::string& path, const InvariantHeader& hdr,
                      const std::vector<cd>& data);
std::pair<InvariantHeader, std::vector<cd>> read_invariants(
    const std::string& path);

// Basis cache keyed by (n, d): header (n, lambda, d, N), per-column index
// rows, then the sampled and transformed columns.
void write_basis(const std::string& path, const DiscBasis& basis);
DiscBasis read_basis(const std::string& path);

// Flat float64 arrays (rendered images, recovered signals).
void write_flat(const std::string& path, const std::vector<double>& data);
std::vector<double> read_flat(const std::string& path);

// Experiment configuration (JSON): { "dim":1|2, "m":int, "n":int,
// "gamma":float or "p":int, "sigma":float or "snr":float, "seed":int } plus
// optional pipeline keys (d, b1, b2, angles, counts, trials, optimizer).
struct ExperimentSpec {
  MeasurementConfig cfg;
  std::optional<double> snr;  // sigma derived from SNR when present
  int d = 0;                  // basis size (2D)
  double b1 = 1.0, b2 = 0.0;  // 0 -> default
  int angles = 0;
  std::vector<int64_t> counts;  // micrograph count schedule for sweeps
  int64_t sim_count = 1;        // files written by the simulate command
  int trials = 10;
  int max_iters = 5000;
  double grad_tol = 1e-9;
  int restarts = 5;
  bool ls_phases = false;
  bool sigma_from_pixels = false;
};
ExperimentSpec read_spec(const std::string& path);

}  // namespace mtd::io
