// Command-line front end: simulate | accumulate | recover1d | recover2d |
// sweep | selftest. All outputs are deterministic given (config, seed).

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtd/bessel.hpp"
#include "mtd/core_model.hpp"
#include "mtd/estimate.hpp"
#include "mtd/io.hpp"
#include "mtd/parallel.hpp"
#include "mtd/recover.hpp"
#include "mtd/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Cli {
  std::string config;
  std::string out = ".";
  std::string resume;
  int64_t seed = -1;  // -1: keep the config seed
  int threads = 0;
  std::vector<std::string> inputs;
};

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

mtd::io::ExperimentSpec load_spec(const Cli& cli) {
  mtd::require(!cli.config.empty(), mtd::ErrorCode::config,
               "this command needs --config");
  mtd::io::ExperimentSpec spec = mtd::io::read_spec(cli.config);
  if (cli.seed >= 0) spec.cfg.seed = static_cast<uint64_t>(cli.seed);
  return spec;
}

// Planted targets are drawn from dedicated seed streams so every command
// regenerates the same truth from the config alone.
mtd::TargetSignal1D make_target_1d(const mtd::io::ExperimentSpec& spec) {
  std::mt19937_64 rng = mtd::make_stream(spec.cfg.seed, 9001);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> vals(2 * spec.cfg.n);
  for (double& v : vals) v = gauss(rng);
  return {spec.cfg.n, std::move(vals)};
}

mtd::CoeffVector make_target_2d(const mtd::io::ExperimentSpec& spec,
                                const mtd::DiscBasis& basis) {
  std::mt19937_64 rng = mtd::make_stream(spec.cfg.seed, 9002);
  return mtd::random_real_coeffs(basis, rng);
}

void resolve_sigma_1d(mtd::io::ExperimentSpec& spec,
                      const mtd::TargetSignal1D& f) {
  if (spec.snr) spec.cfg.sigma = mtd::sigma_for_snr_1d(f, *spec.snr);
}

void resolve_sigma_2d(mtd::io::ExperimentSpec& spec, const mtd::CoeffVector& v,
                      const mtd::DiscBasis& basis) {
  if (spec.snr) {
    spec.cfg.sigma =
        mtd::sigma_for_snr_2d(mtd::render_image(v, basis), basis.n, *spec.snr);
  }
}

std::string mic_path(const std::string& dir, int64_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "mic_%06lld.bin", static_cast<long long>(i));
  return (fs::path(dir) / buf).string();
}

void write_report(const std::string& path, const json& j) {
  std::ofstream os(path);
  mtd::require(os.good(), mtd::ErrorCode::io, "cannot write " + path);
  os << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

void cmd_simulate(const Cli& cli) {
  mtd::io::ExperimentSpec spec = load_spec(cli);
  fs::create_directories(cli.out);
  if (spec.cfg.dim == 1) {
    mtd::TargetSignal1D f = make_target_1d(spec);
    resolve_sigma_1d(spec, f);
    mtd::io::write_flat((fs::path(cli.out) / "target1d.bin").string(), f.values);
    for (int64_t i = 0; i < spec.sim_count; ++i) {
      auto [mic, placement] = mtd::synthesize_1d(spec.cfg, f, i);
      mtd::io::write_micrograph(mic_path(cli.out, i), mic, spec.cfg);
    }
  } else {
    mtd::DiscBasis basis = mtd::build_basis(spec.cfg.n, spec.d);
    mtd::CoeffVector v = make_target_2d(spec, basis);
    resolve_sigma_2d(spec, v, basis);
    std::vector<double> packed;
    for (const mtd::cd& z : v.v) {
      packed.push_back(z.real());
      packed.push_back(z.imag());
    }
    mtd::io::write_flat((fs::path(cli.out) / "target2d_coeffs.bin").string(),
                        packed);
    mtd::io::write_flat((fs::path(cli.out) / "target2d_image.bin").string(),
                        mtd::render_image(v, basis));
    for (int64_t i = 0; i < spec.sim_count; ++i) {
      auto [mic, placement] = mtd::synthesize_2d(spec.cfg, v, basis, i);
      mtd::io::write_micrograph(mic_path(cli.out, i), mic, spec.cfg);
    }
  }
  std::cout << "simulate: wrote " << spec.sim_count << " micrograph(s) to "
            << cli.out << "\n";
}

void cmd_accumulate(const Cli& cli) {
  mtd::io::ExperimentSpec spec = load_spec(cli);
  fs::create_directories(cli.out);
  std::vector<std::string> files = cli.inputs;
  if (files.empty()) {
    for (const auto& e : fs::directory_iterator(cli.out)) {
      std::string name = e.path().filename().string();
      if (name.rfind("mic_", 0) == 0 && e.path().extension() == ".bin") {
        files.push_back(e.path().string());
      }
    }
    std::sort(files.begin(), files.end());
  }
  mtd::MomentAccumulator acc =
      cli.resume.empty()
          ? mtd::make_accumulator(spec.cfg.dim, spec.cfg.m, spec.cfg.n)
          : mtd::io::read_checkpoint(cli.resume);
  int64_t skip = acc.count;
  for (size_t i = 0; i < files.size(); ++i) {
    if (static_cast<int64_t>(i) < skip) continue;
    mtd::io::MicrographFile mf = mtd::io::read_micrograph(files[i]);
    mtd::require(mf.mic.dim == spec.cfg.dim && mf.mic.m == spec.cfg.m &&
                     mf.cfg.n == spec.cfg.n,
                 mtd::ErrorCode::config,
                 "micrograph header does not match config: " + files[i]);
    mtd::absorb(acc, mf.mic, cli.threads);
  }
  std::string ckpt = (fs::path(cli.out) / "checkpoint.bin").string();
  mtd::io::write_checkpoint(ckpt, acc);
  std::cout << "accumulate: " << acc.count << " micrograph(s) -> " << ckpt
            << "\n";
}

mtd::MomentAccumulator load_checkpoint(const Cli& cli) {
  std::string path = cli.resume.empty()
                         ? (fs::path(cli.out) / "checkpoint.bin").string()
                         : cli.resume;
  mtd::require(fs::exists(path), mtd::ErrorCode::io,
               "missing checkpoint: " + path);
  return mtd::io::read_checkpoint(path);
}

void cmd_recover1d(const Cli& cli) {
  double t0 = now_seconds();
  mtd::io::ExperimentSpec spec = load_spec(cli);
  mtd::TargetSignal1D truth = make_target_1d(spec);
  resolve_sigma_1d(spec, truth);
  mtd::MomentAccumulator acc = load_checkpoint(cli);
  mtd::Estimate1D est =
      mtd::debias_1d(acc, spec.cfg.sigma, spec.cfg.gamma());
  mtd::Bispectrum1D bis = mtd::bispectrum_from_V(est.V, spec.cfg.n);
  mtd::TargetSignal1D rec = mtd::invert_bispectrum(bis, spec.ls_phases);
  double err = mtd::align_error_1d(rec, truth);
  mtd::io::write_flat((fs::path(cli.out) / "recovered1d.bin").string(),
                      rec.values);
  json rep = {{"aligned_error", err},
              {"micrographs", acc.count},
              {"mean_estimate", est.T},
              {"wall_seconds", now_seconds() - t0}};
  write_report((fs::path(cli.out) / "report1d.json").string(), rep);
  std::cout << "recover1d: aligned error " << err << "\n";
}

void cmd_recover2d(const Cli& cli) {
  double t0 = now_seconds();
  mtd::io::ExperimentSpec spec = load_spec(cli);
  mtd::DiscBasis basis = mtd::build_basis(spec.cfg.n, spec.d);
  mtd::CoeffVector truth = make_target_2d(spec, basis);
  resolve_sigma_2d(spec, truth, basis);
  mtd::MomentAccumulator acc = load_checkpoint(cli);

  mtd::BinMap bins = mtd::bin_map(spec.cfg.n, spec.b1, spec.b2);
  std::vector<mtd::cd> est_bins;
  {
    std::vector<mtd::cd> est = mtd::debias_2d(
        acc, spec.cfg.sigma, spec.cfg.gamma(), spec.sigma_from_pixels);
    est_bins = mtd::bin_reduce(est, bins);
  }

  mtd::OptimizerOptions opts;
  opts.max_iters = spec.max_iters;
  opts.grad_tol = spec.grad_tol;
  opts.restarts = spec.restarts;
  opts.seed = spec.cfg.seed;
  if (spec.cfg.sigma == 0.0) {
    double tn2 = 0.0;
    for (const mtd::cd& z : est_bins) tn2 += std::norm(z);
    opts.success_cost = 1e-16 * tn2;
  }
  mtd::Recovery2D rec =
      mtd::recover_2d_binned(basis, bins, est_bins, opts, spec.angles,
                             cli.threads, &truth);

  std::vector<double> packed;
  for (const mtd::cd& z : rec.v.v) {
    packed.push_back(z.real());
    packed.push_back(z.imag());
  }
  mtd::io::write_flat((fs::path(cli.out) / "recovered2d_coeffs.bin").string(),
                      packed);
  mtd::io::write_flat((fs::path(cli.out) / "recovered2d_image.bin").string(),
                      mtd::render_image(mtd::impose_real_constraint(rec.v, basis),
                                        basis));
  json rep = {{"final_cost", rec.report.cost},
              {"iterations", rec.report.iterations},
              {"restarts", rec.report.restarts_used},
              {"converged", rec.report.converged},
              {"aligned_error", rec.aligned_error},
              {"micrographs", acc.count},
              {"wall_seconds", now_seconds() - t0}};
  write_report((fs::path(cli.out) / "report2d.json").string(), rep);
  std::cout << "recover2d: aligned error " << rec.aligned_error << " (cost "
            << rec.report.cost << ")\n";
}

// One CSV row per schedule point, averaged over trials.
void cmd_sweep(const Cli& cli) {
  mtd::io::ExperimentSpec spec = load_spec(cli);
  mtd::require(!spec.counts.empty(), mtd::ErrorCode::config,
               "sweep needs a nonempty \"counts\" schedule");
  fs::create_directories(cli.out);
  std::string csv_path = (fs::path(cli.out) / "sweep.csv").string();
  std::ofstream csv(csv_path);
  mtd::require(csv.good(), mtd::ErrorCode::io, "cannot write " + csv_path);
  csv << "count,err_invariant_binned,err_reconstruction,wall_seconds,seed\n";

  if (spec.cfg.dim == 1) {
    mtd::TargetSignal1D truth = make_target_1d(spec);
    resolve_sigma_1d(spec, truth);
    mtd::Bispectrum1D btrue = mtd::bispectrum_from_dft(truth);
    double bnorm = 0.0;
    for (const mtd::cd& z : btrue.B) bnorm += std::norm(z);
    bnorm = std::sqrt(bnorm);
    int64_t counter = 0;
    for (int64_t p : spec.counts) {
      double t0 = now_seconds();
      double sum_inv = 0.0, sum_rec = 0.0;
      int rec_ok = 0;
      mtd::MeasurementConfig cfg = spec.cfg;
      cfg.p = static_cast<int>(p);
      cfg.validate();
      for (int trial = 0; trial < spec.trials; ++trial) {
        auto [mic, placement] = mtd::synthesize_1d(cfg, truth, counter++);
        mtd::MomentAccumulator acc =
            mtd::make_accumulator(1, cfg.m, cfg.n);
        mtd::absorb(acc, mic, cli.threads);
        mtd::Estimate1D est = mtd::debias_1d(acc, cfg.sigma, cfg.gamma());
        mtd::Bispectrum1D best = mtd::bispectrum_from_V(est.V, cfg.n);
        double e = 0.0;
        for (size_t i = 0; i < best.B.size(); ++i) {
          e += std::norm(best.B[i] - btrue.B[i]);
        }
        sum_inv += std::sqrt(e) / bnorm;
        try {
          mtd::TargetSignal1D rec =
              mtd::invert_bispectrum(best, spec.ls_phases);
          sum_rec += mtd::align_error_1d(rec, truth);
          ++rec_ok;
        } catch (const mtd::Error&) {
          // inversion rejected at this noise level; skip the trial
        }
      }
      csv << p << "," << sum_inv / spec.trials << ","
          << (rec_ok ? sum_rec / rec_ok : -1.0) << ","
          << now_seconds() - t0 << "," << spec.cfg.seed << "\n";
      csv.flush();
    }
  } else {
    mtd::DiscBasis basis = mtd::build_basis(spec.cfg.n, spec.d);
    mtd::CoeffVector truth = make_target_2d(spec, basis);
    resolve_sigma_2d(spec, truth, basis);
    mtd::BinMap bins = mtd::bin_map(spec.cfg.n, spec.b1, spec.b2);
    mtd::SHatEngine engine(basis, spec.angles, cli.threads);
    engine.set_coeffs(truth);
    std::vector<mtd::cd> truth_bins = engine.bin_sums(bins);
    double tnorm = 0.0;
    for (const mtd::cd& z : truth_bins) tnorm += std::norm(z);
    tnorm = std::sqrt(tnorm);

    std::vector<int64_t> schedule = spec.counts;
    std::sort(schedule.begin(), schedule.end());
    int64_t max_count = schedule.back();
    std::vector<mtd::MomentAccumulator> acc(
        spec.trials,
        mtd::make_accumulator(2, spec.cfg.m, spec.cfg.n));
    std::vector<mtd::CoeffVector> warm(spec.trials);
    int64_t absorbed = 0;
    for (int64_t count : schedule) {
      double t0 = now_seconds();
      double sum_inv = 0.0, sum_rec = 0.0;
      for (int trial = 0; trial < spec.trials; ++trial) {
        for (int64_t i = absorbed; i < count; ++i) {
          auto [mic, placement] = mtd::synthesize_2d(
              spec.cfg, truth, basis,
              static_cast<uint64_t>(trial) * max_count + i);
          mtd::absorb(acc[trial], mic, cli.threads);
        }
        std::vector<mtd::cd> est_bins;
        {
          std::vector<mtd::cd> est =
              mtd::debias_2d(acc[trial], spec.cfg.sigma, spec.cfg.gamma(),
                             spec.sigma_from_pixels);
          est_bins = mtd::bin_reduce(est, bins);
        }
        double e = 0.0;
        for (size_t i = 0; i < est_bins.size(); ++i) {
          e += std::norm(est_bins[i] - truth_bins[i]);
        }
        sum_inv += std::sqrt(e) / tnorm;

        mtd::OptimizerOptions opts;
        opts.max_iters = spec.max_iters;
        opts.grad_tol = spec.grad_tol;
        opts.restarts = spec.restarts;
        opts.seed = spec.cfg.seed + 131 * trial;
        mtd::Recovery2D rec = mtd::recover_2d_binned(
            basis, bins, est_bins, opts, spec.angles, cli.threads, &truth,
            warm[trial].v.empty() ? nullptr : &warm[trial]);
        warm[trial] = rec.v;
        sum_rec += rec.aligned_error;
      }
      absorbed = count;
      csv << count << "," << sum_inv / spec.trials << ","
          << sum_rec / spec.trials << "," << now_seconds() - t0 << ","
          << spec.cfg.seed << "\n";
      csv.flush();
    }
  }
  std::cout << "sweep: wrote " << csv_path << "\n";
}

// ---------------------------------------------------------------------------

bool check(bool ok, const char* name) {
  std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
  return ok;
}

int cmd_selftest(const Cli& cli) {
  bool all = true;
  {
    double x = 1.0;
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof(double));
    all &= check(bytes[7] == 0x3f, "little-endian float64 layout");
  }
  all &= check(std::abs(mtd::bessel_roots(0, 1)[0] - 2.404825557695773) < 1e-10,
               "first zero of J0");
  all &= check(std::abs(mtd::bessel_roots(1, 1)[0] - 3.831705970207512) < 1e-10,
               "first zero of J1");
  {
    std::mt19937_64 rng = mtd::make_stream(7, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> vals(8);
    for (double& v : vals) v = gauss(rng);
    mtd::TargetSignal1D f(4, vals);
    mtd::TargetSignal1D rec = mtd::invert_bispectrum(
        mtd::bispectrum_from_V(mtd::auto3_V(f), 4));
    all &= check(mtd::align_error_1d(rec, f) < 1e-8, "1D bispectrum round trip");
  }
  {
    mtd::DiscBasis basis = mtd::build_basis(3, 8);
    std::mt19937_64 rng = mtd::make_stream(7, 2);
    mtd::CoeffVector v = mtd::random_real_coeffs(basis, rng);
    mtd::SHatEngine engine(basis, 0, cli.threads);
    engine.set_coeffs(v);
    std::vector<mtd::cd> dense = engine.dense();
    std::vector<mtd::cd> truth = mtd::s_hat_truth(v, basis);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < dense.size(); ++i) {
      num += std::norm(dense[i] - truth[i]);
      den += std::norm(truth[i]);
    }
    all &= check(std::sqrt(num / den) < 1e-10, "2D forward model vs oracle");
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"autocorrelation analysis for multi-target detection"};
  app.require_subcommand(1);
  Cli cli;
  if (const char* env = std::getenv("MTD_THREADS")) {
    cli.threads = std::atoi(env);
  }

  std::string cmd_names[] = {"simulate",  "accumulate", "recover1d",
                             "recover2d", "sweep",      "selftest"};
  for (const std::string& name : cmd_names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", cli.config, "experiment config (JSON)");
    sub->add_option("--out", cli.out, "output directory");
    sub->add_option("--seed", cli.seed, "seed override");
    sub->add_option("--threads", cli.threads, "worker threads (0 = auto)");
    sub->add_option("--resume", cli.resume, "checkpoint to resume from");
    if (name == "accumulate") {
      sub->add_option("files", cli.inputs, "micrograph files");
    }
  }

  CLI11_PARSE(app, argc, argv);
  std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (sub == "simulate") {
      cmd_simulate(cli);
    } else if (sub == "accumulate") {
      cmd_accumulate(cli);
    } else if (sub == "recover1d") {
      cmd_recover1d(cli);
    } else if (sub == "recover2d") {
      cmd_recover2d(cli);
    } else if (sub == "sweep") {
      cmd_sweep(cli);
    } else {
      return cmd_selftest(cli);
    }
  } catch (const mtd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(mtd::ErrorCode::io);
  }
  return 0;
}
