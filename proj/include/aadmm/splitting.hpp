#ifndef AADMM_SPLITTING_HPP
#define AADMM_SPLITTING_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "aadmm/core.hpp"
#include "aadmm/prox.hpp"

namespace aadmm {

/// A set-valued operator A represented by its resolvent J_{tA} = (Id + tA)^{-1}.
///
/// The caller is responsible for maximal comonotonicity of A; the library
/// cannot verify it. `modulus` is the comonotonicity modulus when known.
struct ResolventOperator {
  std::function<Vector(const Vector&, double)> evaluator;
  std::optional<double> modulus;

  Vector operator()(const Vector& u, double t) const { return evaluator(u, t); }
};

struct Relaxation {
  double lambda;
  double mu;
  double kappa;
};

/// lambda = 1 + delta/gamma, mu = 1 + gamma/delta, kappa = delta/(gamma + delta).
Relaxation compute_relaxation(double gamma, double delta);

/// Upper bound on the averaging parameter for the (alpha, beta)-comonotone pair.
double kappa_bar(double alpha, double beta, double gamma, double delta);

struct AdrValidation {
  enum class Branch { Balanced, Strict, Infeasible };  // alpha+beta = 0, > 0, < 0

  Branch branch = Branch::Infeasible;
  bool holds = false;
  /// Open gamma interval for the given delta (alpha + beta > 0 only); empty when
  /// delta + 2 beta <= 0.
  std::optional<std::pair<double, double>> gamma_interval;
};

/// Never throws; reports which parameter regime applies and whether it holds.
AdrValidation validate_adr_params(double alpha, double beta, double gamma, double delta);

/// Parameters of the adaptive Douglas-Rachford iteration
/// w+ = (1-kappa) w + kappa J^lambda_{gamma A} J^mu_{delta B} w.
struct AdrConfig {
  double alpha;
  double beta;
  double gamma;
  double delta;
  double lambda;
  double mu;
  double kappa;
  double kappa_bar;

  /// Validates (alpha, beta, gamma, delta), derives (lambda, mu) and defaults
  /// kappa to delta/(gamma+delta). Throws ParameterError on violation.
  static AdrConfig make(double alpha, double beta, double gamma, double delta,
                        std::optional<double> kappa = std::nullopt);
};

/// J_{delta S} for S = (subdiff g)^{-1}: u - delta * prox_{g/delta}(u/delta).
Vector resolvent_of_S(const ProxFunction& g, double delta, const Vector& u);

struct QResolvent {
  Vector v;  // J_{gamma Q}(u)
  Vector x;  // the x-subproblem minimiser with v = u + gamma M x
};

/// J_{gamma Q} for Q = (-M) o (subdiff f)^{-1} o (-M^T).
///
/// Supported: f quadratic with any map (linear solve), or any proximable f
/// with M = Id. `map_curvature` adds (c/2)||Mx||^2 to a quadratic f. A
/// prefactored solver for shift (gamma + map_curvature) may be supplied.
QResolvent resolvent_of_Q(const ProxFunction& f, const LinearMap& map, double gamma,
                          const Vector& u, double map_curvature = 0.0,
                          const ShiftedNormalSolver* solver = nullptr);

ResolventOperator make_resolvent_S(ProxFunction g);
ResolventOperator make_resolvent_Q(ProxFunction f, LinearMap map, double map_curvature = 0.0);
/// J_{t subdiff f} = prox_{t f}.
ResolventOperator make_subdifferential_resolvent(ProxFunction f);

Vector adr_step(const AdrConfig& config, const ResolventOperator& ja,
                const ResolventOperator& jb, const Vector& w);

struct AdrResult {
  Vector w;
  std::vector<double> delta_w_norms;
  long iterations = 0;
  bool converged = false;
};

/// Iterates adr_step until ||w_{k+1} - w_k|| <= tol or max_iter steps.
/// The observer, when set, sees (k, w_k) for k = 0, 1, ...
AdrResult adr_solve(const AdrConfig& config, const ResolventOperator& ja,
                    const ResolventOperator& jb, const Vector& w0, double tol,
                    long max_iter,
                    const std::function<void(long, const Vector&)>& observer = {});

/// CSV with header `iter,delta_w_norm`.
void write_adr_trace_csv(std::ostream& out, const AdrResult& result);

}  // namespace aadmm

#endif  // AADMM_SPLITTING_HPP
