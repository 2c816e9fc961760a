#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "aadmm/admm.hpp"
#include "aadmm/splitting.hpp"
#include "oracles.hpp"

using namespace aadmm;
using doctest::Approx;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<long>(v.size()));
  long i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ResolventOperator identity_resolvent() {
  return {[](const Vector& u, double) { return u; }, std::nullopt};
}

// Projection onto the line spanned by `dir` through the origin.
ResolventOperator line_projector(Vector dir) {
  dir.normalize();
  return {[dir](const Vector& u, double) -> Vector { return dir * dir.dot(u); }, 0.0};
}

// Resolvent of a * Id: u / (1 + t a).
ResolventOperator scaled_identity(double a) {
  return {[a](const Vector& u, double t) -> Vector { return u / (1.0 + t * a); }, 1.0 / a};
}

// Conic averagedness: R = (1 - 1/theta) Id + (1/theta) J is nonexpansive
// with theta = t / (2 (t + modulus)).
void check_conic_averaged(const std::function<Vector(const Vector&)>& j, double t,
                          double modulus, long dim, std::mt19937_64& rng, int pairs) {
  const double theta = t / (2.0 * (t + modulus));
  auto r = [&](const Vector& u) -> Vector { return (1.0 - 1.0 / theta) * u + j(u) / theta; };
  for (int i = 0; i < pairs; ++i) {
    const Vector u = oracle::random_vec(rng, dim, 3.0);
    const Vector v = oracle::random_vec(rng, dim, 3.0);
    CHECK((r(u) - r(v)).norm() <= (u - v).norm() * (1 + 1e-9) + 1e-9);
  }
}

}  // namespace

TEST_CASE("compute_relaxation") {
  const auto a = compute_relaxation(1, 1);
  CHECK(a.lambda == 2);
  CHECK(a.mu == 2);
  CHECK(a.kappa == 0.5);
  const auto b = compute_relaxation(2, 1);
  CHECK(b.lambda == 1.5);
  CHECK(b.mu == 3);
  CHECK(b.kappa == Approx(1.0 / 3).epsilon(1e-15));
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const double g = std::exp(oracle::uniform(rng, -5, 5));
    const double d = std::exp(oracle::uniform(rng, -5, 5));
    const auto r = compute_relaxation(g, d);
    // Subtracting 1 from lambda or mu costs up to max(g/d, d/g) ulps.
    const double tol = 4e-16 * std::max({1.0, g / d, d / g});
    CHECK(std::abs((r.lambda - 1) * (r.mu - 1) - 1.0) <= tol);
    CHECK(std::abs((r.lambda - 1) * g - d) <= tol * d);
    CHECK(std::abs(r.kappa - (r.lambda - 1) / r.lambda) <= tol * r.kappa);
  }
  CHECK_THROWS_AS(compute_relaxation(0, 1), ParameterError);
  CHECK_THROWS_AS(compute_relaxation(1, -1), ParameterError);
}

TEST_CASE("kappa_bar values") {
  CHECK(kappa_bar(0, 0, 1.5, 1.5) == 1.0);
  CHECK(kappa_bar(0.5, -0.5, 1, 2) == 1.0);
  CHECK(kappa_bar(1, 0, 1, 1) == Approx(1.0).epsilon(1e-12));
  CHECK(kappa_bar(1, 0, 1, 2) == Approx(7.0 / 6.0).epsilon(1e-12));
  CHECK_THROWS_AS(kappa_bar(0, 0, 1, 2), ParameterError);
  CHECK_THROWS_AS(kappa_bar(-1, 0, 1, 1), ParameterError);
  CHECK_THROWS_AS(kappa_bar(1, 0, 10, 1), ParameterError);
}

TEST_CASE("kappa_bar is continuous across alpha + beta -> 0") {
  for (double gamma : {0.5, 1.0, 3.0}) {
    const double alpha = 0.7, beta = -0.7 + 1e-9;
    const double delta = gamma + 2 * alpha;
    CHECK(std::abs(kappa_bar(alpha, beta, gamma, delta) - 1.0) <= 1e-6);
  }
}

TEST_CASE("validate_adr_params branches") {
  auto v = validate_adr_params(0, 0, 2, 2);
  CHECK(v.branch == AdrValidation::Branch::Balanced);
  CHECK(v.holds);
  CHECK_FALSE(validate_adr_params(0, 0, 2, 2.5).holds);
  v = validate_adr_params(1, 0, 1, 1);
  CHECK(v.branch == AdrValidation::Branch::Strict);
  CHECK(v.holds);
  REQUIRE(v.gamma_interval);
  CHECK(v.gamma_interval->first == Approx(1 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(v.gamma_interval->second == Approx(1 + std::sqrt(2.0)).epsilon(1e-12));
  v = validate_adr_params(0, -1, 1, 1);
  CHECK(v.branch == AdrValidation::Branch::Infeasible);
  CHECK_FALSE(v.holds);
  v = validate_adr_params(1, -0.5, 1, 0.5);  // delta + 2 beta <= 0
  CHECK_FALSE(v.gamma_interval.has_value());
  CHECK_FALSE(validate_adr_params(1, 0, -1, 1).holds);
  CHECK_NOTHROW(validate_adr_params(NAN, 0, 1, 1));
}

TEST_CASE("existence-of-parameters interval agrees with the defining inequality") {
  std::mt19937_64 rng(32);
  int agree = 0, holds = 0;
  for (int i = 0; i < 10000; ++i) {
    const double alpha = oracle::uniform(rng, -3, 3);
    const double beta = oracle::uniform(rng, -3, 3);
    if (!(alpha + beta > 0)) {
      --i;
      continue;
    }
    const double gamma = oracle::uniform(rng, 0.01, 10);
    const double delta = oracle::uniform(rng, 0.01, 10);
    const bool inequality =
        2 * delta * (alpha + beta) + (gamma + delta) * (gamma + delta) <
        4 * (gamma + alpha) * (delta + beta);
    const auto v = validate_adr_params(alpha, beta, gamma, delta);
    const bool interval = v.gamma_interval && gamma > v.gamma_interval->first &&
                          gamma < v.gamma_interval->second;
    agree += inequality == interval;
    holds += inequality;
  }
  CHECK(agree == 10000);
  CHECK(holds > 500);
}

TEST_CASE("AdrConfig::make") {
  const auto c = AdrConfig::make(1, 0, 2, 1);
  CHECK(c.lambda == 1.5);
  CHECK(c.mu == 3);
  CHECK(c.kappa == Approx(1.0 / 3));
  CHECK(c.kappa_bar > c.kappa);
  CHECK_THROWS_AS(AdrConfig::make(1, 0, 2, 1, 0.0), ParameterError);
  CHECK_THROWS_AS(AdrConfig::make(1, 0, 2, 1, c.kappa_bar), ParameterError);
  CHECK_THROWS_AS(AdrConfig::make(0, 0, 1, 2), ParameterError);
  CHECK(AdrConfig::make(0, 0, 1, 1, 0.9).kappa == 0.9);
}

TEST_CASE("resolvent of S") {
  const auto zero = ProxFunction::penalty(0, PenaltyKernel::soft());
  CHECK(resolvent_of_S(zero, 2.0, vec({3, -1})).norm() == 0.0);
  const auto soft = ProxFunction::penalty(1, PenaltyKernel::soft());
  CHECK(resolvent_of_S(soft, 1.0, vec({3}))[0] == 1.0);
  // y in the subdifferential of g at z  =>  J(y + delta z) = y.
  const auto firm = ProxFunction::penalty(2, PenaltyKernel::firm(8));
  const double delta = 1.5;
  for (double z : {0.0, 1.0, -3.0, 9.0}) {
    double y;
    if (z == 0.0) y = 0.7;  // inside [-omega, omega]
    else if (std::abs(z) < 8) y = 2 * (std::copysign(1.0, z) - z / 8);
    else y = 0.0;
    CHECK(std::abs(resolvent_of_S(firm, delta, vec({y + delta * z}))[0] - y) <= 1e-12);
  }
  CHECK_THROWS_AS(resolvent_of_S(firm, 0.2, vec({1})), ParameterError);
  CHECK_THROWS_AS(resolvent_of_S(soft, 0.0, vec({1})), ParameterError);
  CHECK_THROWS_AS(resolvent_of_S(ProxFunction::penalty(1, PenaltyKernel::hard()), 1, vec({1})),
                  UnsupportedError);
}

TEST_CASE("resolvent of Q") {
  const Vector phi = vec({1, -2, 0.5});
  const auto f = ProxFunction::quadratic(phi);
  const auto id = LinearMap::identity(3);
  // y = 0, z = phi, gamma = 1 -> u = -phi
  auto r = resolvent_of_Q(f, id, 1.0, -phi);
  CHECK((r.x - phi).norm() <= 1e-15);
  CHECK(r.v.norm() <= 1e-15);
  // tiny gamma -> x tends to the unregularised minimiser
  const auto f0 = ProxFunction::quadratic(Vector::Zero(4));
  const auto d = LinearMap::difference(4);
  r = resolvent_of_Q(f0, d, 1e-9, vec({1, 2, 3}) * 1e-9);
  CHECK(r.x.norm() <= 1e-8);
  // v = u + gamma M x always; the quadratic path solves the normal equations.
  std::mt19937_64 rng(33);
  const Vector anchor = oracle::random_vec(rng, 6);
  const auto fq = ProxFunction::quadratic(anchor);
  const auto d6 = LinearMap::difference(6);
  const Matrix dd = d6.to_dense();
  for (int i = 0; i < 20; ++i) {
    const Vector u = oracle::random_vec(rng, 5);
    const double gamma = oracle::uniform(rng, 0.1, 5);
    const auto q = resolvent_of_Q(fq, d6, gamma, u);
    CHECK((q.v - (u + gamma * dd * q.x)).norm() <= 1e-12);
    const Vector lhs = q.x + gamma * dd.transpose() * (dd * q.x);
    CHECK((lhs - (anchor - dd.transpose() * u)).norm() <= 1e-10);
  }
  // identity path with a proximable (non-quadratic) f
  const auto fp = ProxFunction::penalty(1, PenaltyKernel::soft());
  r = resolvent_of_Q(fp, id, 2.0, vec({-6, 0, 1}));
  CHECK((r.x - vec({2.5, 0, 0})).norm() <= 1e-15);
  CHECK((r.v - vec({-1, 0, 1})).norm() <= 1e-15);
  CHECK_THROWS_AS(resolvent_of_Q(fp, d, 1.0, vec({1, 2, 3})), UnsupportedError);
  CHECK_THROWS_AS(resolvent_of_Q(f0, d, 1.0, vec({1, 2})), DimensionError);
  CHECK_THROWS_AS(resolvent_of_Q(f0, d, 0.0, vec({1, 2, 3})), ParameterError);
  ShiftedNormalSolver wrong(d, 5.0);
  CHECK_THROWS_AS(resolvent_of_Q(f0, d, 1.0, vec({1, 2, 3}), 0.0, &wrong), ParameterError);
  ShiftedNormalSolver right(d, 1.0);
  CHECK((resolvent_of_Q(f0, d, 1.0, vec({1, 2, 3}), 0.0, &right).x -
         resolvent_of_Q(f0, d, 1.0, vec({1, 2, 3})).x)
            .norm() == 0.0);
}

TEST_CASE("conic averagedness certificates") {
  std::mt19937_64 rng(34);
  SUBCASE("S resolvent, modulus beta") {
    for (const auto& g : {ProxFunction::penalty(2, PenaltyKernel::firm(8)),
                          ProxFunction::penalty(1, PenaltyKernel::soft()),
                          ProxFunction::penalty(0.5, PenaltyKernel::firm(1))}) {
      const auto js = make_resolvent_S(g);
      const double beta = js.modulus.value();
      for (double delta : {0.6, 1.0, 4.0}) {
        if (!(delta > -beta) || !(1 / delta < g.max_prox_parameter())) continue;
        check_conic_averaged([&](const Vector& u) { return js(u, delta); }, delta, beta, 4,
                             rng, 400);
      }
    }
  }
  SUBCASE("Q resolvent, modulus alpha / ||M||^2") {
    const auto jq = make_resolvent_Q(ProxFunction::quadratic(oracle::random_vec(rng, 8)),
                                     LinearMap::difference(8));
    const double mod = jq.modulus.value();
    CHECK(mod == Approx(1.0 / std::pow(op_norm(LinearMap::difference(8)), 2)));
    for (double gamma : {0.3, 1.0, 5.0}) {
      check_conic_averaged([&](const Vector& u) { return jq(u, gamma); }, gamma, mod, 7, rng,
                           400);
    }
  }
}

TEST_CASE("adr_step fixed points") {
  const auto cfg = AdrConfig::make(0, 0, 1, 1);
  const Vector w = vec({1, -2});
  CHECK((adr_step(cfg, identity_resolvent(), identity_resolvent(), w) - w).norm() == 0);
  // A = a Id, B = b Id: the origin is the only fixed point.
  const auto ja = scaled_identity(2.0), jb = scaled_identity(3.0);
  const auto cfg2 = AdrConfig::make(0.5, 1.0 / 3, 1, 1);
  CHECK(adr_step(cfg2, ja, jb, Vector::Zero(2)).norm() == 0);
}

TEST_CASE("classical DR on two lines finds their intersection") {
  const auto ja = line_projector(vec({1, 1}));
  const auto jb = line_projector(vec({1, -2}));
  const auto cfg = AdrConfig::make(0, 0, 1, 1);
  const auto res = adr_solve(cfg, ja, jb, vec({3, 7}), 1e-12, 10000);
  CHECK(res.converged);
  const Vector zero = jb(res.w, 1.0);
  CHECK(zero.norm() <= 1e-10);
}

TEST_CASE("adr_solve on a strongly and weakly comonotone scalar pair") {
  // A = 0.1 Id is 10-comonotone, B = -0.4 Id is -2.5-comonotone; zer(A + B) = {0}.
  const auto ja = scaled_identity(0.1), jb = scaled_identity(-0.4);
  const double gamma = 4.0, delta = 5.5;
  const double bar = kappa_bar(10, -2.5, gamma, delta);
  const auto cfg = AdrConfig::make(10, -2.5, gamma, delta, 0.5 * bar);
  const auto res = adr_solve(cfg, ja, jb, vec({1.7}), 1e-12, 100000);
  CHECK(res.converged);
  CHECK(std::abs(jb(res.w, delta)[0]) <= 1e-10);
}

TEST_CASE("adr_solve bookkeeping") {
  const auto cfg = AdrConfig::make(0, 0, 1, 1);
  long observed = 0;
  auto res = adr_solve(cfg, identity_resolvent(), identity_resolvent(), vec({1}), 1e-9, 10,
                       [&](long k, const Vector&) { observed = k; });
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(res.delta_w_norms.size() == 1);
  CHECK(observed == 1);
  res = adr_solve(cfg, scaled_identity(1), scaled_identity(1), vec({1}), 0.0, 7);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 7);
  res = adr_solve(cfg, identity_resolvent(), identity_resolvent(), vec({1}), 1e-9, 0);
  CHECK(res.iterations == 0);
  std::ostringstream out;
  res = adr_solve(cfg, scaled_identity(1), scaled_identity(1), vec({1}), 0.0, 2);
  write_adr_trace_csv(out, res);
  CHECK(out.str().rfind("iter,delta_w_norm\n1,", 0) == 0);
  CHECK_THROWS_AS(adr_solve(cfg, identity_resolvent(), identity_resolvent(), vec({NAN}), 1, 1),
                  ParameterError);
}

TEST_CASE("self-duality with the identity map") {
  // aADMM on (f, g) with M = Id; t = w / delta follows the aDR on
  // (A = subdiff f, B = subdiff g) with steps 1/gamma, 1/delta.
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector phi = oracle::random_vec(rng, 1, 2.0);
    const double omega = oracle::uniform(rng, 0.3, 2.0);
    const double zeta = oracle::uniform(rng, 1.0, 4.0);
    const auto f = ProxFunction::quadratic(phi);
    const auto g = ProxFunction::penalty(omega, PenaltyKernel::firm(zeta));
    const auto problem = AdmmProblem::make(f, g, LinearMap::identity(1));
    const double delta = oracle::uniform(rng, 0.2, 2.0) - 2 * problem.beta();
    const auto range = gamma_range(problem, delta);
    const double gamma = range.single_point ? range.lower : 0.5 * (range.lower + range.upper);
    const auto config = SolverConfig::adaptive(gamma, delta);

    const auto rel = compute_relaxation(1 / gamma, 1 / delta);
    AdrConfig dual{1.0, -omega / zeta, 1 / gamma, 1 / delta, rel.lambda, rel.mu,
                   delta / (gamma + delta), 1.0};
    CHECK(dual.lambda == Approx(compute_relaxation(gamma, delta).mu));
    CHECK(dual.mu == Approx(compute_relaxation(gamma, delta).lambda));
    const auto ja = make_subdifferential_resolvent(f);
    const auto jb = make_subdifferential_resolvent(g);

    IterateState s = IterateState::zeros(problem);
    Vector t = map_to_adr_state(config, s) / delta;
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
      s = aadmm_step(problem, config, s);
      t = adr_step(dual, ja, jb, t);
      worst = std::max(worst, (map_to_adr_state(config, s) / delta - t).norm());
    }
    CHECK(worst <= 1e-10);
  }
}
