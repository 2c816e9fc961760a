#include "aadmm/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "aadmm/splitting.hpp"

namespace aadmm {

AdmmProblem AdmmProblem::make(ProxFunction f, ProxFunction g, LinearMap map,
                              double map_curvature, double norm_tol) {
  map = with_cached_norm(map, norm_tol);
  const double norm = *map.cached_norm();
  if (norm == 0.0) throw ParameterError("the coupling map M must be nonzero");
  if (map_curvature != 0.0 && !f.is_quadratic()) {
    throw UnsupportedError("a curvature term on ||Mx||^2 requires a quadratic f");
  }
  if (f.is_quadratic() && f.anchor().size() != map.cols()) {
    throw DimensionError("quadratic anchor vs map columns", map.cols(), f.anchor().size());
  }
  return AdmmProblem{std::move(f), std::move(g), std::move(map), norm, map_curvature};
}

double AdmmProblem::alpha() const {
  double a = f.modulus();
  if (map_curvature < 0.0) a += map_curvature * norm_M * norm_M;
  return a;
}

double AdmmProblem::objective(const Vector& x, const Vector& z) const {
  double value = f.value(x) + g.value(z);
  if (map_curvature != 0.0) value += 0.5 * map_curvature * apply(map, x).squaredNorm();
  return value;
}

ConvexityReport validate_convexity(const AdmmProblem& problem) {
  ConvexityReport report{};
  report.alpha = problem.alpha();
  report.beta = problem.beta();
  report.norm_sq = problem.norm_M * problem.norm_M;
  report.margin = report.alpha + report.beta * report.norm_sq;
  report.pass = report.alpha >= 0.0 && report.margin >= 0.0;
  return report;
}

bool GammaRange::contains(double gamma) const {
  if (single_point) {
    return std::abs(gamma - lower) <= 1e-12 * std::max(1.0, std::abs(lower));
  }
  return gamma > lower && gamma < upper;
}

GammaRange gamma_range(const AdmmProblem& problem, double delta) {
  const ConvexityReport cvx = validate_convexity(problem);
  if (!cvx.pass) {
    throw ParameterError(fmt::format(
        "convexity assumption fails: need alpha >= 0 and alpha + beta ||M||^2 >= 0 "
        "(alpha = {}, beta = {}, ||M||^2 = {})",
        cvx.alpha, cvx.beta, cvx.norm_sq));
  }
  const double delta_min = std::max(0.0, -2.0 * cvx.beta);
  if (!(delta > delta_min)) {
    throw ParameterError(
        fmt::format("delta = {} must exceed max(0, -2 beta) = {}", delta, delta_min));
  }
  const double centre = delta + 2.0 * cvx.beta;
  const double scale = std::max({1.0, std::abs(cvx.alpha), std::abs(cvx.beta) * cvx.norm_sq});
  if (cvx.margin <= 1e-14 * scale) return {true, centre, centre};
  const double radius = std::sqrt(2.0 * cvx.margin * centre) / problem.norm_M;
  return {false, std::max(0.0, centre - radius), centre + radius};
}

SolverConfig SolverConfig::adaptive(double gamma, double delta) {
  SolverConfig c;
  c.gamma = gamma;
  c.delta = delta;
  c.mode = Mode::Adaptive;
  return c;
}

SolverConfig SolverConfig::classical(double gamma) {
  SolverConfig c;
  c.gamma = gamma;
  c.delta = gamma;
  c.mode = Mode::Classical;
  return c;
}

IterateState IterateState::zeros(const AdmmProblem& problem) {
  const long n = problem.map.cols();
  const long m = problem.map.rows();
  return {Vector::Zero(n), Vector::Zero(m), Vector::Zero(m)};
}

double TraceRow::stop_quantity() const { return std::max({r_norm, dx_norm, dz_norm}); }

std::string to_string(Status status) {
  return status == Status::Converged ? "converged" : "max_iter";
}

void check_admissible(const AdmmProblem& problem, const SolverConfig& config) {
  if (!(config.gamma > 0.0) || !std::isfinite(config.gamma)) {
    throw ParameterError("gamma must be positive");
  }
  if (!(config.eps_abs > 0.0) || !(config.eps_rel > 0.0)) {
    throw ParameterError("eps_abs and eps_rel must be positive");
  }
  if (config.max_iter < 0) throw ParameterError("max_iter must be nonnegative");
  const double delta = config.effective_delta();
  const GammaRange range = gamma_range(problem, delta);
  if (!range.contains(config.gamma)) {
    if (range.single_point) {
      throw ParameterError(fmt::format(
          "gamma = {} must equal delta + 2 beta = {} when alpha + beta ||M||^2 = 0",
          config.gamma, range.lower));
    }
    throw ParameterError(fmt::format("gamma = {} outside the convergent range ]{}, {}[ for delta = {}",
                                     config.gamma, range.lower, range.upper, delta));
  }
}

namespace {

void check_state(const AdmmProblem& problem, const IterateState& s) {
  const long n = problem.map.cols();
  const long m = problem.map.rows();
  if (s.x.size() != n) throw DimensionError("iterate x", n, s.x.size());
  if (s.z.size() != m) throw DimensionError("iterate z", m, s.z.size());
  if (s.y.size() != m) throw DimensionError("iterate y", m, s.y.size());
  require_finite(s.x, "iterate x");
  require_finite(s.z, "iterate z");
  require_finite(s.y, "iterate y");
}

IterateState step_with(const AdmmProblem& problem, const SolverConfig& config,
                       const IterateState& state, const ShiftedNormalSolver* solver) {
  const double gamma = config.gamma;
  const double delta = config.effective_delta();
  IterateState next;
  next.x = resolvent_of_Q(problem.f, problem.map, gamma, state.y - gamma * state.z,
                          problem.map_curvature, solver)
               .x;
  const Vector mx = apply(problem.map, next.x);
  next.z = problem.g.prox(1.0 / delta, mx + state.y / delta);
  next.y = state.y + delta * (mx - next.z);
  return next;
}

}  // namespace

IterateState aadmm_step(const AdmmProblem& problem, const SolverConfig& config,
                        const IterateState& state) {
  check_state(problem, state);
  return step_with(problem, config, state, nullptr);
}

ResidualReport residuals(const AdmmProblem& problem, const SolverConfig& config,
                         const IterateState& prev, const IterateState& curr) {
  const double gamma = config.gamma;
  const double delta = config.effective_delta();
  const double m = static_cast<double>(problem.map.rows());
  const double n = static_cast<double>(problem.map.cols());

  const Vector mx = apply(problem.map, curr.x);
  ResidualReport report{};
  report.r_norm = (mx - curr.z).norm();
  report.s_norm =
      apply_transpose(problem.map, gamma * prev.z - delta * curr.z - (gamma - delta) * mx).norm();
  report.eps_primal =
      std::sqrt(m) * config.eps_abs + config.eps_rel * std::max(mx.norm(), curr.z.norm());
  const Vector& dual_ref = config.dual_ref == DualToleranceRef::ZIterate ? curr.z : curr.y;
  report.eps_dual = std::sqrt(n) * config.eps_abs +
                    config.eps_rel * apply_transpose(problem.map, dual_ref).norm();
  report.converged = report.r_norm <= report.eps_primal && report.s_norm <= report.eps_dual;
  return report;
}

SolveResult solve(const AdmmProblem& problem, const SolverConfig& config,
                  const IterateState& init) {
  check_admissible(problem, config);
  check_state(problem, init);

  const ShiftedNormalSolver solver(problem.map, config.gamma + problem.map_curvature);
  if (!problem.f.is_quadratic() && problem.map.kind() != LinearMap::Kind::Identity) {
    throw UnsupportedError("x-update needs a quadratic f or the identity map");
  }

  SolveResult result{init, {}};
  result.trace.rows.reserve(static_cast<std::size_t>(std::min<long>(config.max_iter, 100000)));
  const auto start = std::chrono::steady_clock::now();
  for (long k = 1; k <= config.max_iter; ++k) {
    IterateState next = step_with(problem, config, result.state,
                                  problem.f.is_quadratic() ? &solver : nullptr);
    const ResidualReport res = residuals(problem, config, result.state, next);
    TraceRow row{};
    row.iter = k;
    row.r_norm = res.r_norm;
    row.s_norm = res.s_norm;
    row.objective = problem.objective(next.x, next.z);
    row.dx_norm = (next.x - result.state.x).norm();
    row.dz_norm = (next.z - result.state.z).norm();
    row.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.rows.push_back(row);
    result.state = std::move(next);

    const bool stop = config.stop_rule == StopRule::PrimalDual
                          ? res.converged
                          : row.stop_quantity() <= config.stop_tol;
    if (stop) {
      result.trace.status = Status::Converged;
      break;
    }
  }
  return result;
}

SolveResult solve(const AdmmProblem& problem, const SolverConfig& config) {
  return solve(problem, config, IterateState::zeros(problem));
}

double evaluate_augmented_lagrangian(const AdmmProblem& problem, double gamma,
                                     const IterateState& state) {
  if (!(gamma >= 0.0)) throw ParameterError("penalty parameter must be nonnegative");
  const Vector r = apply(problem.map, state.x) - state.z;
  return problem.objective(state.x, state.z) + state.y.dot(r) + 0.5 * gamma * r.squaredNorm();
}

CriticalPointReport check_critical_point(const AdmmProblem& problem,
                                         const IterateState& state, double tol) {
  if (!problem.f.is_quadratic()) {
    throw UnsupportedError("critical point check requires a quadratic f");
  }
  check_state(problem, state);
  CriticalPointReport report{};
  const Vector mx = apply(problem.map, state.x);
  report.feasibility = (mx - state.z).norm();

  Vector grad = state.x - problem.f.anchor();
  if (problem.map_curvature != 0.0) {
    grad += problem.map_curvature * apply_transpose(problem.map, mx);
  }
  report.stationarity = (grad + apply_transpose(problem.map, state.y)).norm();

  const double bound = problem.g.max_prox_parameter();
  report.probe_t = std::isinf(bound) ? 1.0 : 0.5 * bound;
  report.g_inclusion =
      (state.z - problem.g.prox(report.probe_t, state.z + report.probe_t * state.y)).norm();

  report.feasible = report.feasibility <= tol;
  report.stationary = report.stationarity <= tol;
  report.included = report.g_inclusion <= tol;
  return report;
}

XConvergenceReport x_convergence_conditions(const AdmmProblem& problem) {
  XConvergenceReport r{problem.alpha() > 0.0, false};
  switch (problem.map.kind()) {
    case LinearMap::Kind::Identity:
      r.map_injective = true;
      break;
    case LinearMap::Kind::Difference:
      break;  // constants are in the kernel
    case LinearMap::Kind::Dense: {
      const Matrix& m = problem.map.matrix();
      r.map_injective = m.rows() >= m.cols() &&
                        Eigen::ColPivHouseholderQR<Matrix>(m).rank() == m.cols();
      break;
    }
  }
  return r;
}

Vector map_to_adr_state(const SolverConfig& config, const IterateState& state) {
  return state.y + config.effective_delta() * state.z;
}

void write_trace_csv(std::ostream& out, const Trace& trace, bool with_stop_quantity) {
  out << "iter,r_norm,s_norm,objective,elapsed_s,dx_norm,dz_norm";
  out << (with_stop_quantity ? ",stop_quantity\n" : "\n");
  for (const TraceRow& r : trace.rows) {
    fmt::print(out, "{},{},{},{},{},{},{}", r.iter, r.r_norm, r.s_norm, r.objective,
               r.elapsed_s, r.dx_norm, r.dz_norm);
    if (with_stop_quantity) fmt::print(out, ",{}", r.stop_quantity());
    out << '\n';
  }
}

}  // namespace aadmm
