#ifndef AADMM_BASELINES_HPP
#define AADMM_BASELINES_HPP

#include <optional>

#include "aadmm/admm.hpp"

namespace aadmm {

/// Convex reformulation of a strongly-weakly convex problem:
///   f~ = f + (beta/2)||M.||^2,  g~ = g - (beta/2)||.||^2.
/// Both problems share minimisers and objective values on Mx = z.
struct ReformulatedProblem {
  AdmmProblem reformulated;
  AdmmProblem original;

  /// Objective of the original problem, f(x) + g(z).
  double original_objective(const Vector& x, const Vector& z) const {
    return original.objective(x, z);
  }
};

/// Requires a quadratic f, a separable penalty g, and beta <= 0.
ReformulatedProblem reformulate_convex(const AdmmProblem& problem);

/// Classical ADMM (gamma = delta) on the reformulated problem.
SolveResult classical_admm_on_reformulation(const ReformulatedProblem& reformulated,
                                            const SolverConfig& config,
                                            const IterateState& init);
SolveResult classical_admm_on_reformulation(const ReformulatedProblem& reformulated,
                                            const SolverConfig& config);

struct PdhgmConfig {
  double tau;
  double sigma;
  long max_iter = 100000;
  double tol = 1e-3;

  /// tau = sigma = 0.9 / ||M||.
  static PdhgmConfig defaults(const AdmmProblem& problem);
};

/// Primal-dual hybrid gradient with extrapolation on the primal variable:
///
///   x+ = prox_{tau f}(x - tau M^T y)
///   u  = y + sigma M (2 x+ - x)
///   z+ = prox_{g/sigma}(u / sigma),   y+ = u - sigma z+   (= prox_{sigma g*}(u))
///
/// Stops once max(||Mx+ - z+||, ||x+ - x||, ||z+ - z||) <= tol. In the trace,
/// s_norm holds ||y+ - y||.
SolveResult pdhgm_solve(const AdmmProblem& problem, const PdhgmConfig& config,
                        const IterateState& init);

}  // namespace aadmm

#endif  // AADMM_BASELINES_HPP
