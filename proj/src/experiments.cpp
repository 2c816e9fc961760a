#include "aadmm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "aadmm/baselines.hpp"
#include "aadmm/rng.hpp"
#include "aadmm/signal.hpp"

namespace aadmm {

namespace {

enum : std::uint64_t { kExp1 = 1, kExp2 = 2, kExp3 = 3, kNoise = 1, kStart = 2 };

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results are
/// written by index, so output order never depends on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Vector normal_vector(RandomStream& rng, long n) {
  Vector v(n);
  for (long i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

std::string cell(double v) { return format_number(v); }
std::string cell(long v) { return format_number(v); }
std::string cell(int v) { return format_number(static_cast<long>(v)); }
std::string cell(Status s) { return to_string(s); }

SolverConfig with_tolerances(SolverConfig c, double eps, long max_iter) {
  c.eps_abs = eps;
  c.eps_rel = eps;
  c.max_iter = max_iter;
  return c;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw ParameterError("linspace needs count >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  }
  out.back() = hi;
  return out;
}

AdmmProblem denoising_problem(const Vector& noisy, double omega, const PenaltyKernel& kernel) {
  return AdmmProblem::make(ProxFunction::quadratic(noisy), ProxFunction::penalty(omega, kernel),
                           LinearMap::difference(noisy.size()));
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw ParameterError("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

void check_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw ParameterError(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ParameterError(std::string(what) + " grid must be strictly increasing");
    }
  }
}

}  // namespace

// --- Experiment 1 -----------------------------------------------------------

Exp1Result experiment1(const Exp1Config& config) {
  check_grid(config.omegas, "omega");
  Exp1Result result;
  result.original = generate_block_signal(config.n, derive_seed(config.seed, {kExp1, 0}));
  result.noisy =
      add_gaussian_noise(result.original, config.sigma, derive_seed(config.seed, {kExp1, kNoise}));
  result.mae_noisy = mae(result.noisy, result.original);

  auto run = [&](double omega, Exp1Row& row) -> std::pair<Vector, Vector> {
    const AdmmProblem soft = denoising_problem(result.noisy, omega, PenaltyKernel::soft());
    const double zeta = config.zeta_factor * omega;
    const AdmmProblem firm = denoising_problem(result.noisy, omega, PenaltyKernel::firm(zeta));
    const ConvexityReport cvx = validate_convexity(firm);
    if (!cvx.pass) throw ParameterError("experiment 1: firm problem violates the convexity assumption");

    const SolveResult s =
        solve(soft, with_tolerances(SolverConfig::classical(config.gamma), config.eps, config.max_iter));
    const double delta = config.gamma - 2.0 * firm.beta();
    const SolveResult f = solve(
        firm, with_tolerances(SolverConfig::adaptive(config.gamma, delta), config.eps, config.max_iter));
    row = {omega,
           mae(s.state.x, result.original),
           mae(f.state.x, result.original),
           s.iterations(),
           f.iterations(),
           s.trace.status,
           f.trace.status,
           cvx.margin};
    return {s.state.x, f.state.x};
  };

  result.rows.resize(config.omegas.size());
  parallel_for(config.omegas.size(), config.threads,
               [&](std::size_t i) { run(config.omegas[i], result.rows[i]); });

  Exp1Row scratch{};
  auto [soft_x, firm_x] = run(config.signals_omega, scratch);
  result.denoised_soft = std::move(soft_x);
  result.denoised_firm = std::move(firm_x);
  return result;
}

CsvTable exp1_table(const Exp1Result& result) {
  CsvTable t;
  t.header = {"omega",      "mae_soft",    "mae_firm",    "iters_soft",
              "iters_firm", "status_soft", "status_firm", "firm_margin"};
  for (const Exp1Row& r : result.rows) {
    t.rows.push_back({cell(r.omega), cell(r.mae_soft), cell(r.mae_firm), cell(r.iters_soft),
                      cell(r.iters_firm), cell(r.status_soft), cell(r.status_firm),
                      cell(r.firm_margin)});
  }
  return t;
}

CsvTable exp1_signals_table(const Exp1Result& result) {
  CsvTable t;
  t.header = {"index", "original", "noisy", "denoised_soft", "denoised_firm"};
  for (long i = 0; i < result.original.size(); ++i) {
    t.rows.push_back({cell(i), cell(result.original[i]), cell(result.noisy[i]),
                      cell(result.denoised_soft[i]), cell(result.denoised_firm[i])});
  }
  return t;
}

// --- Experiment 2 -----------------------------------------------------------

Exp2Config Exp2Config::full() {
  Exp2Config c;
  c.sizes.clear();
  for (long n = 1000; n <= 10000; n += 1000) c.sizes.push_back(n);
  c.signals = 10;
  c.starts = 10;
  c.gammas = linspace(0.2, 7.0, 35);
  return c;
}

Exp2Result experiment2(const Exp2Config& config) {
  check_grid(config.gammas, "gamma");
  if (config.sizes.empty() || config.signals < 1 || config.starts < 1) {
    throw ParameterError("experiment 2 needs at least one size, signal and start");
  }
  const double beta = -config.omega / config.zeta;

  // Instances: one noisy signal per (size, signal), one start per (size, signal, start).
  struct Instance {
    AdmmProblem problem;
    ReformulatedProblem reformulated;
    std::vector<IterateState> starts;
  };
  std::vector<Instance> instances;
  for (const long n : config.sizes) {
    for (int s = 0; s < config.signals; ++s) {
      const auto sid = static_cast<std::uint64_t>(s);
      const auto nid = static_cast<std::uint64_t>(n);
      const Vector clean = generate_block_signal(n, derive_seed(config.seed, {kExp2, nid, sid}));
      const Vector noisy =
          add_gaussian_noise(clean, config.sigma, derive_seed(config.seed, {kExp2, nid, sid, kNoise}));
      AdmmProblem problem = denoising_problem(noisy, config.omega, PenaltyKernel::firm(config.zeta));
      ReformulatedProblem reformulated = reformulate_convex(problem);
      std::vector<IterateState> starts;
      for (int k = 0; k < config.starts; ++k) {
        RandomStream rng(derive_seed(config.seed,
                                     {kExp2, nid, sid, kStart, static_cast<std::uint64_t>(k)}));
        IterateState st;
        st.x = normal_vector(rng, n);
        st.z = normal_vector(rng, n - 1);
        st.y = normal_vector(rng, n - 1);
        starts.push_back(std::move(st));
      }
      instances.push_back({std::move(problem), std::move(reformulated), std::move(starts)});
    }
  }

  Exp2Result result;
  result.gammas = config.gammas;
  result.sizes = config.sizes;
  const std::size_t per_instance = static_cast<std::size_t>(config.starts) * config.gammas.size();
  result.cells.resize(instances.size() * per_instance);

  parallel_for(result.cells.size(), config.threads, [&](std::size_t idx) {
    const std::size_t inst = idx / per_instance;
    const std::size_t start = (idx % per_instance) / config.gammas.size();
    const std::size_t g = idx % config.gammas.size();
    const Instance& instance = instances[inst];
    const IterateState& init = instance.starts[start];
    const double gamma = config.gammas[g];

    const SolverConfig adaptive = with_tolerances(
        SolverConfig::adaptive(gamma, gamma - 2.0 * beta), config.eps, config.max_iter);
    const SolverConfig classical =
        with_tolerances(SolverConfig::classical(gamma), config.eps, config.max_iter);
    const SolveResult a = solve(instance.problem, adaptive, init);
    const SolveResult c = classical_admm_on_reformulation(instance.reformulated, classical, init);
    const SolveResult a2 = solve(instance.problem, adaptive, init);

    Exp2Cell& cell = result.cells[idx];
    cell.size = config.sizes[inst / static_cast<std::size_t>(config.signals)];
    cell.signal = static_cast<int>(inst % static_cast<std::size_t>(config.signals));
    cell.start = static_cast<int>(start);
    cell.gamma = gamma;
    cell.iters_aadmm = a.iterations();
    cell.iters_admm = c.iterations();
    cell.iters_aadmm_rerun = a2.iterations();
    cell.status_aadmm = a.trace.status;
    cell.status_admm = c.trace.status;
  });

  for (std::size_t g = 0; g < config.gammas.size(); ++g) {
    std::vector<double> ratios;
    std::vector<double> controls;
    for (const Exp2Cell& c : result.cells) {
      if (c.gamma != config.gammas[g]) continue;
      ratios.push_back(c.ratio());
      controls.push_back(c.control_ratio());
    }
    result.median_ratio.push_back(percentile(ratios, 50.0));
    result.median_control.push_back(percentile(controls, 50.0));
    std::vector<double> pct;
    for (int q = 0; q <= 100; q += 5) pct.push_back(percentile(ratios, q));
    result.percentiles.push_back(std::move(pct));
  }
  for (const long n : config.sizes) {
    std::vector<double> by_gamma;
    for (const double gamma : config.gammas) {
      std::vector<double> ratios;
      for (const Exp2Cell& c : result.cells) {
        if (c.size == n && c.gamma == gamma) ratios.push_back(c.ratio());
      }
      by_gamma.push_back(percentile(ratios, 50.0));
    }
    result.median_ratio_by_size.push_back(std::move(by_gamma));
  }
  return result;
}

CsvTable exp2_cells_table(const Exp2Result& result) {
  CsvTable t;
  t.header = {"size",        "signal",        "start",        "gamma",
              "iters_aadmm", "iters_admm",    "ratio",        "control_ratio",
              "status_aadmm", "status_admm"};
  for (const Exp2Cell& c : result.cells) {
    t.rows.push_back({cell(c.size), cell(c.signal), cell(c.start), cell(c.gamma),
                      cell(c.iters_aadmm), cell(c.iters_admm), cell(c.ratio()),
                      cell(c.control_ratio()), cell(c.status_aadmm), cell(c.status_admm)});
  }
  return t;
}

CsvTable exp2_median_table(const Exp2Result& result) {
  CsvTable t;
  t.header = {"gamma", "median_ratio", "median_control_ratio"};
  for (const long n : result.sizes) t.header.push_back("median_ratio_n" + std::to_string(n));
  for (std::size_t g = 0; g < result.gammas.size(); ++g) {
    std::vector<std::string> row = {cell(result.gammas[g]), cell(result.median_ratio[g]),
                                    cell(result.median_control[g])};
    for (const auto& by_size : result.median_ratio_by_size) row.push_back(cell(by_size[g]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable exp2_percentile_table(const Exp2Result& result) {
  CsvTable t;
  t.header = {"gamma"};
  for (int q = 0; q <= 100; q += 5) t.header.push_back("p" + std::to_string(q));
  for (std::size_t g = 0; g < result.gammas.size(); ++g) {
    std::vector<std::string> row = {cell(result.gammas[g])};
    for (const double v : result.percentiles[g]) row.push_back(cell(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// --- Experiment 3 -----------------------------------------------------------

Exp3Result experiment3(const Exp3Config& config) {
  check_grid(config.gammas, "gamma");
  const Vector clean = generate_block_signal(
      config.n, derive_seed(config.seed, {kExp3, static_cast<std::uint64_t>(config.n)}));
  const Vector noisy = add_gaussian_noise(
      clean, config.sigma,
      derive_seed(config.seed, {kExp3, static_cast<std::uint64_t>(config.n), kNoise}));
  const AdmmProblem problem =
      denoising_problem(noisy, config.omega, PenaltyKernel::firm(config.zeta));
  const ReformulatedProblem reformulated = reformulate_convex(problem);
  const double beta = problem.beta();

  auto stop_config = [&](SolverConfig c) {
    c.stop_rule = StopRule::ChangeAndGap;
    c.stop_tol = config.tol;
    c.max_iter = config.max_iter;
    return c;
  };
  auto run_admm = [&](double gamma) {
    return classical_admm_on_reformulation(reformulated,
                                           stop_config(SolverConfig::classical(gamma)));
  };
  auto run_aadmm = [&](double gamma) {
    return solve(problem, stop_config(SolverConfig::adaptive(gamma, gamma - 2.0 * beta)));
  };
  // Fastest converged run over the candidate grid; ties keep the smaller gamma.
  auto tune = [&](auto&& run, std::optional<double> fixed) {
    if (fixed) return std::make_pair(*fixed, run(*fixed));
    std::optional<std::pair<double, SolveResult>> best;
    for (const double gamma : config.gammas) {
      SolveResult r = run(gamma);
      if (r.trace.status != Status::Converged) continue;
      if (!best || r.iterations() < best->second.iterations()) best.emplace(gamma, std::move(r));
    }
    if (!best) return std::make_pair(config.gammas.front(), run(config.gammas.front()));
    return std::move(*best);
  };

  Exp3Result result{};
  auto [ga, admm] = tune(run_admm, config.gamma_admm);
  auto [gb, aadmm] = tune(run_aadmm, config.gamma_aadmm);
  result.gamma_admm = ga;
  result.admm = std::move(admm);
  result.gamma_aadmm = gb;
  result.delta_aadmm = gb - 2.0 * beta;
  result.aadmm = std::move(aadmm);

  PdhgmConfig pd = PdhgmConfig::defaults(problem);
  if (config.pdhgm_tau) pd.tau = *config.pdhgm_tau;
  if (config.pdhgm_sigma) pd.sigma = *config.pdhgm_sigma;
  pd.tol = config.tol;
  pd.max_iter = config.max_iter;
  result.pdhgm = pdhgm_solve(problem, pd, IterateState::zeros(problem));

  result.mae_pdhgm_vs_aadmm = mae(result.pdhgm.state.x, result.aadmm.state.x);
  result.mae_admm_vs_aadmm = mae(result.admm.state.x, result.aadmm.state.x);
  return result;
}

CsvTable exp3_trace_table(const SolveResult& result) {
  CsvTable t;
  t.header = {"iter", "elapsed_s", "stop_quantity"};
  for (const TraceRow& r : result.trace.rows) {
    t.rows.push_back({cell(r.iter), cell(r.elapsed_s), cell(r.stop_quantity())});
  }
  return t;
}

CsvTable exp3_summary_table(const Exp3Result& result) {
  CsvTable t;
  t.header = {"algorithm", "gamma", "delta", "iterations", "status", "final_stop_quantity",
              "mae_vs_aadmm"};
  auto add = [&](const char* name, double gamma, double delta, const SolveResult& r,
                 double gap) {
    const double last = r.trace.rows.empty() ? NAN : r.trace.rows.back().stop_quantity();
    t.rows.push_back({name, cell(gamma), cell(delta), cell(r.iterations()),
                      cell(r.trace.status), cell(last), cell(gap)});
  };
  add("admm", result.gamma_admm, result.gamma_admm, result.admm, result.mae_admm_vs_aadmm);
  add("aadmm", result.gamma_aadmm, result.delta_aadmm, result.aadmm, 0.0);
  add("pdhgm", NAN, NAN, result.pdhgm, result.mae_pdhgm_vs_aadmm);
  return t;
}

}  // namespace aadmm
