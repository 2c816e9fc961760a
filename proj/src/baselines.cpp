#include "aadmm/baselines.hpp"

#include <chrono>
#include <cmath>

#include <fmt/format.h>

namespace aadmm {

ReformulatedProblem reformulate_convex(const AdmmProblem& problem) {
  const ConvexityReport cvx = validate_convexity(problem);
  if (!cvx.pass) throw ParameterError("reformulation needs alpha >= 0 and alpha + beta ||M||^2 >= 0");
  if (!problem.f.is_quadratic() || problem.map_curvature != 0.0) {
    throw UnsupportedError("reformulation supports a plain quadratic f only");
  }
  const double beta = cvx.beta;
  if (beta > 0.0) throw UnsupportedError("reformulation is implemented for beta <= 0 only");
  if (beta == 0.0) return {problem, problem};

  const auto* pen = std::get_if<ProxFunction::SeparablePenalty>(&problem.g.shape());
  if (pen == nullptr) throw UnsupportedError("reformulation needs a separable penalty g");

  AdmmProblem shifted{problem.f, ProxFunction::shifted_penalty(pen->omega, pen->kernel, beta),
                      problem.map, problem.norm_M, beta};
  return {std::move(shifted), problem};
}

SolveResult classical_admm_on_reformulation(const ReformulatedProblem& reformulated,
                                            const SolverConfig& config,
                                            const IterateState& init) {
  if (config.mode != Mode::Classical && config.gamma != config.delta) {
    throw ParameterError("classical ADMM requires gamma = delta");
  }
  SolverConfig classical = config;
  classical.mode = Mode::Classical;
  classical.delta = classical.gamma;
  return solve(reformulated.reformulated, classical, init);
}

SolveResult classical_admm_on_reformulation(const ReformulatedProblem& reformulated,
                                            const SolverConfig& config) {
  return classical_admm_on_reformulation(reformulated, config,
                                         IterateState::zeros(reformulated.reformulated));
}

PdhgmConfig PdhgmConfig::defaults(const AdmmProblem& problem) {
  const double step = 0.9 / problem.norm_M;
  return {step, step};
}

SolveResult pdhgm_solve(const AdmmProblem& problem, const PdhgmConfig& config,
                        const IterateState& init) {
  const ConvexityReport cvx = validate_convexity(problem);
  if (!(cvx.alpha >= 0.0 && cvx.margin > 0.0)) {
    throw ParameterError(fmt::format(
        "PDHGM requires the strict restriction alpha + beta ||M||^2 > 0 (got {})", cvx.margin));
  }
  if (problem.map_curvature != 0.0) {
    throw UnsupportedError("PDHGM runs on the original problem (no curvature term)");
  }
  if (!(config.tau > 0.0) || !(config.sigma > 0.0)) {
    throw ParameterError("PDHGM step sizes must be positive");
  }
  if (config.tau * config.sigma * cvx.norm_sq > 1.0) {
    throw ParameterError(fmt::format("PDHGM step sizes violate tau sigma ||M||^2 <= 1 ({} > 1)",
                                     config.tau * config.sigma * cvx.norm_sq));
  }
  if (!(1.0 / config.sigma < problem.g.max_prox_parameter())) {
    throw ParameterError("PDHGM dual step: prox of g at 1/sigma is not single valued");
  }
  if (init.x.size() != problem.map.cols() || init.z.size() != problem.map.rows() ||
      init.y.size() != problem.map.rows()) {
    throw DimensionError("PDHGM initial state", problem.map.cols(), init.x.size());
  }

  const double tau = config.tau;
  const double sigma = config.sigma;
  SolveResult result{init, {}};
  const auto start = std::chrono::steady_clock::now();
  for (long k = 1; k <= config.max_iter; ++k) {
    IterateState& s = result.state;
    Vector x = problem.f.prox(tau, s.x - tau * apply_transpose(problem.map, s.y));
    const Vector u = s.y + sigma * apply(problem.map, 2.0 * x - s.x);
    Vector z = problem.g.prox(1.0 / sigma, u / sigma);
    Vector y = u - sigma * z;

    TraceRow row{};
    row.iter = k;
    row.r_norm = (apply(problem.map, x) - z).norm();
    row.s_norm = (y - s.y).norm();
    row.objective = problem.objective(x, z);
    row.dx_norm = (x - s.x).norm();
    row.dz_norm = (z - s.z).norm();
    row.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.rows.push_back(row);
    s = {std::move(x), std::move(z), std::move(y)};
    if (row.stop_quantity() <= config.tol) {
      result.trace.status = Status::Converged;
      break;
    }
  }
  return result;
}

}  // namespace aadmm
