#ifndef AADMM_ADMM_HPP
#define AADMM_ADMM_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aadmm/core.hpp"
#include "aadmm/prox.hpp"

namespace aadmm {

/// min f(x) + (c/2)||Mx||^2 + g(z)  subject to  Mx = z.
///
/// The curvature term c is zero for ordinary problems; the convex
/// reformulation of a weakly convex problem folds its quadratic shift there.
struct AdmmProblem {
  ProxFunction f;
  ProxFunction g;
  LinearMap map;
  double norm_M;
  double map_curvature = 0.0;

  /// Estimates ||M|| (or uses the map's cached norm) and attaches it.
  static AdmmProblem make(ProxFunction f, ProxFunction g, LinearMap map,
                          double map_curvature = 0.0, double norm_tol = 1e-6);

  /// Modulus of the full x-term f + (c/2)||M.||^2 (lower bound when c < 0).
  double alpha() const;
  double beta() const { return g.modulus(); }

  /// f(x) + (c/2)||Mx||^2 + g(z).
  double objective(const Vector& x, const Vector& z) const;
};

struct ConvexityReport {
  double alpha;
  double beta;
  double norm_sq;
  double margin;  // alpha + beta ||M||^2
  bool pass;
};

ConvexityReport validate_convexity(const AdmmProblem& problem);

/// Admissible penalty parameters gamma for a given delta.
struct GammaRange {
  bool single_point;
  double lower;  // exclusive; equals `upper` for a single point
  double upper;  // exclusive
  bool contains(double gamma) const;
};

GammaRange gamma_range(const AdmmProblem& problem, double delta);

enum class Mode { Adaptive, Classical };
enum class StopRule {
  PrimalDual,    // ||r|| <= eps_primal and ||s|| <= eps_dual
  ChangeAndGap,  // max(||Mx - z||, ||dx||, ||dz||) <= stop_tol
};
enum class DualToleranceRef { ZIterate, Multiplier };

struct SolverConfig {
  double gamma = 1.0;
  double delta = 1.0;
  double eps_abs = 1e-4;
  double eps_rel = 1e-4;
  long max_iter = 10000;
  Mode mode = Mode::Adaptive;
  StopRule stop_rule = StopRule::PrimalDual;
  double stop_tol = 1e-3;
  /// Relative dual tolerance scales ||M^T z|| by default; ||M^T y|| on request.
  DualToleranceRef dual_ref = DualToleranceRef::ZIterate;

  static SolverConfig adaptive(double gamma, double delta);
  static SolverConfig classical(double gamma);

  /// Classical mode ties delta to gamma.
  double effective_delta() const { return mode == Mode::Classical ? gamma : delta; }
};

struct IterateState {
  Vector x;
  Vector z;
  Vector y;

  static IterateState zeros(const AdmmProblem& problem);
};

struct ResidualReport {
  double r_norm;
  double s_norm;
  double eps_primal;
  double eps_dual;
  bool converged;
};

struct TraceRow {
  long iter;
  double r_norm;
  double s_norm;
  double objective;
  double elapsed_s;
  double dx_norm;
  double dz_norm;

  /// max(||Mx - z||, ||dx||, ||dz||).
  double stop_quantity() const;
};

enum class Status { Converged, MaxIter };
std::string to_string(Status status);

struct Trace {
  std::vector<TraceRow> rows;
  Status status = Status::MaxIter;
};

struct SolveResult {
  IterateState state;
  Trace trace;
  long iterations() const { return static_cast<long>(trace.rows.size()); }
};

/// Throws ParameterError unless the problem satisfies the convexity assumption
/// and (gamma, delta) lie in the convergent range.
void check_admissible(const AdmmProblem& problem, const SolverConfig& config);

IterateState aadmm_step(const AdmmProblem& problem, const SolverConfig& config,
                        const IterateState& state);

ResidualReport residuals(const AdmmProblem& problem, const SolverConfig& config,
                         const IterateState& prev, const IterateState& curr);

SolveResult solve(const AdmmProblem& problem, const SolverConfig& config,
                  const IterateState& init);
SolveResult solve(const AdmmProblem& problem, const SolverConfig& config);

/// f(x) + g(z) + <y, Mx - z> + (gamma/2)||Mx - z||^2.
double evaluate_augmented_lagrangian(const AdmmProblem& problem, double gamma,
                                     const IterateState& state);

struct CriticalPointReport {
  double feasibility;     // ||Mx - z||
  double stationarity;    // ||grad f(x) + M^T y||
  double g_inclusion;     // ||z - prox_{t g}(z + t y)||
  double probe_t;
  bool feasible;
  bool stationary;
  bool included;
  bool all() const { return feasible && stationary && included; }
};

CriticalPointReport check_critical_point(const AdmmProblem& problem,
                                         const IterateState& state, double tol);

/// Sufficient conditions for convergence of x itself, beyond Mx and z:
/// f strongly convex, or M^T M invertible. Other qualifications are assumed.
struct XConvergenceReport {
  bool f_strongly_convex;
  bool map_injective;
  bool guaranteed() const { return f_strongly_convex || map_injective; }
};

XConvergenceReport x_convergence_conditions(const AdmmProblem& problem);

/// w = y + delta z, the governing sequence of the dual aDR iteration.
Vector map_to_adr_state(const SolverConfig& config, const IterateState& state);

/// CSV header `iter,r_norm,s_norm,objective,elapsed_s,dx_norm,dz_norm`, plus a
/// trailing `stop_quantity` column on request.
void write_trace_csv(std::ostream& out, const Trace& trace, bool with_stop_quantity = false);

}  // namespace aadmm

#endif  // AADMM_ADMM_HPP
