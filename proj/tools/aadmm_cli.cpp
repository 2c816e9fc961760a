// Command-line front end: signal generation, single denoising runs and the
// three benchmark experiments. Exit codes: 0 success, 1 other failure,
// 2 parameter rejection, 3 non-convergence of a required run.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aadmm/admm.hpp"
#include "aadmm/baselines.hpp"
#include "aadmm/csv.hpp"
#include "aadmm/experiments.hpp"
#include "aadmm/signal.hpp"

namespace fs = std::filesystem;
using namespace aadmm;

namespace {

constexpr int kExitParameter = 2;
constexpr int kExitNoConvergence = 3;

struct DenoiseOptions {
  std::string in;
  std::string out;
  std::string trace;
  std::string penalty = "firm";
  double omega = 2.0;
  std::optional<double> zeta;
  double gamma = 1.0;
  std::optional<double> delta;
  std::string delta_rule = "centre";
  double eps_abs = 1e-4;
  double eps_rel = 1e-4;
  long max_iter = 10000;
  std::string mode = "adaptive";
  std::optional<double> pdhgm_tau;
  std::optional<double> pdhgm_sigma;
  double pdhgm_tol = 1e-3;
};

int run_denoise(const DenoiseOptions& o) {
  if (o.penalty == "hard") {
    throw UnsupportedError(
        "hard penalty has no convexity modulus; no solver in this tool accepts it");
  }
  const Vector noisy = read_vector_csv(fs::path(o.in));
  const PenaltyKernel kernel = o.penalty == "soft"
                                   ? PenaltyKernel::soft()
                                   : PenaltyKernel::firm(o.zeta.value_or(4.0 * o.omega));
  const AdmmProblem problem = denoising_problem(noisy, o.omega, kernel);

  SolveResult result;
  bool with_stop_quantity = false;
  if (o.mode == "pdhgm") {
    PdhgmConfig pd = PdhgmConfig::defaults(problem);
    if (o.pdhgm_tau) pd.tau = *o.pdhgm_tau;
    if (o.pdhgm_sigma) pd.sigma = *o.pdhgm_sigma;
    pd.tol = o.pdhgm_tol;
    pd.max_iter = o.max_iter;
    result = pdhgm_solve(problem, pd, IterateState::zeros(problem));
    with_stop_quantity = true;
  } else {
    SolverConfig config;
    if (o.mode == "adaptive") {
      const double delta = o.delta ? *o.delta
                           : o.delta_rule == "equal" ? o.gamma
                                                     : o.gamma - 2.0 * problem.beta();
      config = SolverConfig::adaptive(o.gamma, delta);
    } else {
      config = SolverConfig::classical(o.gamma);
    }
    config.eps_abs = o.eps_abs;
    config.eps_rel = o.eps_rel;
    config.max_iter = o.max_iter;
    if (o.mode == "reformulated") {
      result = classical_admm_on_reformulation(reformulate_convex(problem), config);
    } else {
      result = solve(problem, config);
    }
  }

  write_vector_csv(fs::path(o.out), result.state.x);
  if (!o.trace.empty()) {
    std::ofstream trace(o.trace);
    if (!trace) throw Error("cannot open trace file " + o.trace);
    write_trace_csv(trace, result.trace, with_stop_quantity);
  }
  std::cerr << o.mode << ": " << to_string(result.trace.status) << " after "
            << result.iterations() << " iterations\n";
  return result.trace.status == Status::Converged ? 0 : kExitNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive ADMM for strongly-weakly convex problems: TV denoising tools"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a noisy block signal as single-column CSV");
  SignalSpec spec;
  std::string gen_out, gen_clean;
  gen->add_option("--n", spec.n, "Signal length")->check(CLI::Range(2L, 100000000L));
  gen->add_option("--sigma", spec.sigma, "Noise standard deviation")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", spec.seed, "Random seed");
  gen->add_option("--out", gen_out, "Noisy signal CSV")->required();
  gen->add_option("--clean-out", gen_clean, "Noise-free signal CSV");

  // denoise
  auto* den = app.add_subcommand("denoise", "Solve one TV denoising problem");
  DenoiseOptions d;
  den->add_option("--in", d.in, "Noisy signal CSV")->required();
  den->add_option("--out", d.out, "Denoised signal CSV")->required();
  den->add_option("--trace", d.trace, "Per-iteration trace CSV");
  den->add_option("--penalty", d.penalty)->check(CLI::IsMember({"soft", "firm", "hard"}));
  den->add_option("--omega", d.omega)->check(CLI::PositiveNumber);
  den->add_option("--zeta", d.zeta, "Firm parameter (default 4 omega)");
  den->add_option("--gamma", d.gamma)->check(CLI::PositiveNumber);
  auto* delta_opt = den->add_option("--delta", d.delta, "z-step penalty (adaptive mode)");
  den->add_option("--delta-rule", d.delta_rule, "centre: delta = gamma - 2 beta; equal: delta = gamma")
      ->check(CLI::IsMember({"centre", "equal"}))
      ->excludes(delta_opt);
  den->add_option("--eps-abs", d.eps_abs)->check(CLI::PositiveNumber);
  den->add_option("--eps-rel", d.eps_rel)->check(CLI::PositiveNumber);
  den->add_option("--max-iter", d.max_iter)->check(CLI::NonNegativeNumber);
  den->add_option("--mode", d.mode)
      ->check(CLI::IsMember({"adaptive", "classical", "reformulated", "pdhgm"}));
  den->add_option("--pdhgm-tau", d.pdhgm_tau);
  den->add_option("--pdhgm-sigma", d.pdhgm_sigma);
  den->add_option("--pdhgm-tol", d.pdhgm_tol)->check(CLI::PositiveNumber);

  // experiments
  struct ExpOptions {
    std::uint64_t seed;
    bool full = false;
    std::string out_dir = "results";
    unsigned threads = 0;
  };
  ExpOptions e1{1}, e2{2}, e3{3};
  auto add_exp = [&](const char* name, const char* help, ExpOptions& o) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--seed", o.seed, "Base seed");
    sub->add_flag("--full", o.full, "Run the full-size grids");
    sub->add_option("--out-dir", o.out_dir, "Output directory");
    sub->add_option("--threads", o.threads, "Worker threads (0: all cores)");
    return sub;
  };
  auto* exp1 = add_exp("exp1", "Soft versus firm penalty over omega", e1);
  auto* exp2 = add_exp("exp2", "Iteration ratios aADMM / ADMM over gamma", e2);
  auto* exp3 = add_exp("exp3", "ADMM, aADMM and PDHGM stop-quantity traces", e3);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const Vector clean = generate_block_signal(spec.n, spec.seed);
      write_vector_csv(fs::path(gen_out), add_gaussian_noise(clean, spec.sigma, spec.seed));
      if (!gen_clean.empty()) write_vector_csv(fs::path(gen_clean), clean);
      return 0;
    }
    if (*den) return run_denoise(d);
    if (*exp1) {
      Exp1Config c;
      c.seed = e1.seed;
      c.threads = e1.threads;
      const Exp1Result r = experiment1(c);
      const fs::path dir(e1.out_dir);
      write_csv(dir / "exp1_mae.csv", exp1_table(r));
      write_csv(dir / "exp1_signals.csv", exp1_signals_table(r));
      return 0;
    }
    if (*exp2) {
      Exp2Config c = e2.full ? Exp2Config::full() : Exp2Config{};
      c.seed = e2.seed;
      c.threads = e2.threads;
      const Exp2Result r = experiment2(c);
      const fs::path dir(e2.out_dir);
      write_csv(dir / "exp2_cells.csv", exp2_cells_table(r));
      write_csv(dir / "exp2_median.csv", exp2_median_table(r));
      write_csv(dir / "exp2_percentiles.csv", exp2_percentile_table(r));
      return 0;
    }
    if (*exp3) {
      const std::vector<long> sizes = e3.full ? std::vector<long>{1000, 5000} : std::vector<long>{1000};
      const fs::path dir(e3.out_dir);
      for (const long n : sizes) {
        Exp3Config c;
        c.n = n;
        c.seed = e3.seed;
        const Exp3Result r = experiment3(c);
        const std::string suffix = "_n" + std::to_string(n) + ".csv";
        write_csv(dir / ("exp3_admm" + suffix), exp3_trace_table(r.admm));
        write_csv(dir / ("exp3_aadmm" + suffix), exp3_trace_table(r.aadmm));
        write_csv(dir / ("exp3_pdhgm" + suffix), exp3_trace_table(r.pdhgm));
        write_csv(dir / ("exp3_summary" + suffix), exp3_summary_table(r));
      }
      return 0;
    }
  } catch (const ParameterError& err) {
    std::cerr << "parameter rejected: " << err.what() << '\n';
    return kExitParameter;
  } catch (const UnsupportedError& err) {
    std::cerr << "parameter rejected: " << err.what() << '\n';
    return kExitParameter;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
