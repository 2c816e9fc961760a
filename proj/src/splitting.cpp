#include "aadmm/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace aadmm {

namespace {

bool is_zero_sum(double alpha, double beta) {
  const double scale = std::max({1.0, std::abs(alpha), std::abs(beta)});
  return std::abs(alpha + beta) <= 1e-14 * scale;
}

}  // namespace

Relaxation compute_relaxation(double gamma, double delta) {
  if (!(gamma > 0.0) || !(delta > 0.0)) {
    throw ParameterError("compute_relaxation: gamma and delta must be positive");
  }
  return {1.0 + delta / gamma, 1.0 + gamma / delta, delta / (gamma + delta)};
}

AdrValidation validate_adr_params(double alpha, double beta, double gamma, double delta) {
  AdrValidation report;
  const bool positive = gamma > 0.0 && delta > 0.0;
  if (is_zero_sum(alpha, beta)) {
    report.branch = AdrValidation::Branch::Balanced;
    const double target = gamma + 2.0 * alpha;
    const double scale = std::max({1.0, std::abs(delta), std::abs(target)});
    report.holds = positive && target > 0.0 && std::abs(target - delta) <= 1e-12 * scale;
    return report;
  }
  if (alpha + beta < 0.0) {
    report.branch = AdrValidation::Branch::Infeasible;
    return report;
  }
  report.branch = AdrValidation::Branch::Strict;
  report.holds =
      positive && (gamma + delta) * (gamma + delta) < 4.0 * (gamma + alpha) * (delta + beta);
  const double centre = delta + 2.0 * beta;
  if (centre > 0.0) {
    const double radius = std::sqrt(2.0 * (alpha + beta) * centre);
    report.gamma_interval = std::make_pair(centre - radius, centre + radius);
  }
  return report;
}

double kappa_bar(double alpha, double beta, double gamma, double delta) {
  const AdrValidation report = validate_adr_params(alpha, beta, gamma, delta);
  if (!report.holds) {
    throw ParameterError(fmt::format(
        "kappa_bar: (alpha, beta, gamma, delta) = ({}, {}, {}, {}) violate "
        "0 < gamma + 2 alpha = delta (alpha + beta = 0) or "
        "(gamma + delta)^2 < 4 (gamma + alpha)(delta + beta) (alpha + beta > 0)",
        alpha, beta, gamma, delta));
  }
  if (report.branch == AdrValidation::Branch::Balanced) return 1.0;
  return (4.0 * (gamma + alpha) * (delta + beta) - (gamma + delta) * (gamma + delta)) /
         (2.0 * (gamma + delta) * (alpha + beta));
}

AdrConfig AdrConfig::make(double alpha, double beta, double gamma, double delta,
                          std::optional<double> kappa) {
  const Relaxation r = compute_relaxation(gamma, delta);
  const double bound = aadmm::kappa_bar(alpha, beta, gamma, delta);
  const double k = kappa.value_or(r.kappa);
  if (!(k > 0.0 && k < bound)) {
    throw ParameterError(
        fmt::format("aDR averaging parameter kappa = {} must lie in ]0, {}[", k, bound));
  }
  return {alpha, beta, gamma, delta, r.lambda, r.mu, k, bound};
}

Vector resolvent_of_S(const ProxFunction& g, double delta, const Vector& u) {
  const double beta = g.modulus();
  if (!(delta > std::max(0.0, -beta))) {
    throw ParameterError(fmt::format(
        "resolvent of S needs delta > max(0, -beta) (delta = {}, beta = {})", delta, beta));
  }
  if (!(1.0 / delta < g.max_prox_parameter())) {
    throw ParameterError(fmt::format(
        "resolvent of S: prox of g is not single valued at parameter 1/delta = {}",
        1.0 / delta));
  }
  return u - delta * g.prox(1.0 / delta, u / delta);
}

QResolvent resolvent_of_Q(const ProxFunction& f, const LinearMap& map, double gamma,
                          const Vector& u, double map_curvature,
                          const ShiftedNormalSolver* solver) {
  if (!(gamma > 0.0)) throw ParameterError("resolvent of Q needs gamma > 0");
  if (u.size() != map.rows()) throw DimensionError("resolvent of Q", map.rows(), u.size());

  if (f.is_quadratic()) {
    const double shift = gamma + map_curvature;
    Vector rhs = f.anchor() - apply_transpose(map, u);
    Vector x;
    if (solver != nullptr) {
      if (solver->size() != map.cols() || solver->shift() != shift) {
        throw ParameterError("resolvent of Q: prefactored solver has the wrong shift");
      }
      x = solver->solve(rhs);
    } else {
      x = solve_shifted_normal(map, shift, rhs);
    }
    Vector v = u + gamma * apply(map, x);
    return {std::move(v), std::move(x)};
  }
  if (map.kind() == LinearMap::Kind::Identity && map_curvature == 0.0) {
    Vector x = f.prox(1.0 / gamma, -u / gamma);
    Vector v = u + gamma * x;
    return {std::move(v), std::move(x)};
  }
  throw UnsupportedError(
      "resolvent of Q supports a quadratic f with any map, or a proximable f with the "
      "identity map");
}

ResolventOperator make_resolvent_S(ProxFunction g) {
  const double beta = g.modulus();
  return {[g = std::move(g)](const Vector& u, double t) { return resolvent_of_S(g, t, u); },
          beta};
}

ResolventOperator make_resolvent_Q(ProxFunction f, LinearMap map, double map_curvature) {
  map = with_cached_norm(map);
  const double norm = *map.cached_norm();
  double alpha = f.modulus();
  if (map_curvature < 0.0) alpha += map_curvature * norm * norm;
  std::optional<double> mod;
  if (norm > 0.0) mod = alpha / (norm * norm);
  return {[f = std::move(f), map = std::move(map), map_curvature](const Vector& u, double t) {
            return resolvent_of_Q(f, map, t, u, map_curvature).v;
          },
          mod};
}

ResolventOperator make_subdifferential_resolvent(ProxFunction f) {
  return {[f = std::move(f)](const Vector& u, double t) { return f.prox(t, u); },
          std::nullopt};
}

Vector adr_step(const AdrConfig& config, const ResolventOperator& ja,
                const ResolventOperator& jb, const Vector& w) {
  const Vector p = (1.0 - config.mu) * w + config.mu * jb(w, config.delta);
  const Vector q = (1.0 - config.lambda) * p + config.lambda * ja(p, config.gamma);
  return (1.0 - config.kappa) * w + config.kappa * q;
}

AdrResult adr_solve(const AdrConfig& config, const ResolventOperator& ja,
                    const ResolventOperator& jb, const Vector& w0, double tol,
                    long max_iter, const std::function<void(long, const Vector&)>& observer) {
  require_finite(w0, "adr_solve start");
  AdrResult result;
  result.w = w0;
  if (observer) observer(0, result.w);
  for (long k = 0; k < max_iter; ++k) {
    Vector next = adr_step(config, ja, jb, result.w);
    const double dw = (next - result.w).norm();
    result.delta_w_norms.push_back(dw);
    result.w = std::move(next);
    result.iterations = k + 1;
    if (observer) observer(k + 1, result.w);
    if (dw <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

void write_adr_trace_csv(std::ostream& out, const AdrResult& result) {
  out << "iter,delta_w_norm\n";
  for (std::size_t i = 0; i < result.delta_w_norms.size(); ++i) {
    fmt::print(out, "{},{}\n", i + 1, result.delta_w_norms[i]);
  }
}

}  // namespace aadmm
