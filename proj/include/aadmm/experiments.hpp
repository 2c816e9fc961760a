#ifndef AADMM_EXPERIMENTS_HPP
#define AADMM_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aadmm/admm.hpp"
#include "aadmm/csv.hpp"

namespace aadmm {

/// `count` equally spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int count);

/// TV denoising instance: f = 1/2||x - noisy||^2, g = omega * P(.), M = D.
AdmmProblem denoising_problem(const Vector& noisy, double omega, const PenaltyKernel& kernel);

/// Linear-interpolation percentile (q in [0, 100]) of a nonempty sample.
double percentile(std::vector<double> values, double q);

// --- Experiment 1: soft versus firm penalties over a grid of weights -------

struct Exp1Config {
  long n = 256;
  double sigma = 0.5;
  std::uint64_t seed = 1;
  std::vector<double> omegas = linspace(0.1, 5.0, 50);
  double zeta_factor = 4.0;  // zeta = zeta_factor * omega
  double gamma = 1.0;
  double eps = 1e-6;
  long max_iter = 50000;
  double signals_omega = 2.0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct Exp1Row {
  double omega;
  double mae_soft;
  double mae_firm;
  long iters_soft;
  long iters_firm;
  Status status_soft;
  Status status_firm;
  double firm_margin;  // alpha + beta ||D||^2 of the firm problem
};

struct Exp1Result {
  std::vector<Exp1Row> rows;
  Vector original;
  Vector noisy;
  Vector denoised_soft;
  Vector denoised_firm;
  double mae_noisy;
};

Exp1Result experiment1(const Exp1Config& config);
CsvTable exp1_table(const Exp1Result& result);
CsvTable exp1_signals_table(const Exp1Result& result);

// --- Experiment 2: iteration counts, aADMM versus ADMM on the reformulation --

struct Exp2Config {
  std::vector<long> sizes = {256, 1000};
  int signals = 3;
  int starts = 3;
  std::vector<double> gammas = linspace(0.2, 7.0, 18);
  double sigma = 0.5;
  double omega = 2.0;
  double zeta = 8.0;
  double eps = 1e-4;
  long max_iter = 100000;
  std::uint64_t seed = 2;
  unsigned threads = 0;

  /// Sizes 1000..10000, 10 signals x 10 starts, gamma in {0.2, 0.4, ..., 7.0}.
  static Exp2Config full();
};

struct Exp2Cell {
  long size;
  int signal;
  int start;
  double gamma;
  long iters_aadmm;
  long iters_admm;
  long iters_aadmm_rerun;
  Status status_aadmm;
  Status status_admm;
  double ratio() const { return static_cast<double>(iters_aadmm) / static_cast<double>(iters_admm); }
  double control_ratio() const {
    return static_cast<double>(iters_aadmm) / static_cast<double>(iters_aadmm_rerun);
  }
};

struct Exp2Result {
  std::vector<Exp2Cell> cells;
  std::vector<double> gammas;
  std::vector<long> sizes;
  std::vector<double> median_ratio;          // per gamma, over all cells
  std::vector<double> median_control;        // per gamma
  std::vector<std::vector<double>> median_ratio_by_size;  // [size][gamma]
  std::vector<std::vector<double>> percentiles;           // [gamma][0, 5, ..., 100]
};

Exp2Result experiment2(const Exp2Config& config);
CsvTable exp2_cells_table(const Exp2Result& result);
CsvTable exp2_median_table(const Exp2Result& result);
CsvTable exp2_percentile_table(const Exp2Result& result);

// --- Experiment 3: ADMM, aADMM and PDHGM on one instance --------------------

struct Exp3Config {
  long n = 1000;
  double sigma = 0.5;
  double omega = 2.0;
  double zeta = 9.0;
  double tol = 1e-3;
  long max_iter = 200000;
  std::uint64_t seed = 3;
  /// Candidate penalties; each ADMM variant keeps its fastest one.
  std::vector<double> gammas = linspace(0.2, 7.0, 35);
  std::optional<double> gamma_admm;
  std::optional<double> gamma_aadmm;
  std::optional<double> pdhgm_tau;
  std::optional<double> pdhgm_sigma;
};

struct Exp3Result {
  double gamma_admm;
  double gamma_aadmm;
  double delta_aadmm;
  SolveResult admm;
  SolveResult aadmm;
  SolveResult pdhgm;
  double mae_pdhgm_vs_aadmm;
  double mae_admm_vs_aadmm;
};

Exp3Result experiment3(const Exp3Config& config);
/// Columns iter,elapsed_s,stop_quantity.
CsvTable exp3_trace_table(const SolveResult& result);
CsvTable exp3_summary_table(const Exp3Result& result);

}  // namespace aadmm

#endif  // AADMM_EXPERIMENTS_HPP
