#include "aadmm/prox.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace aadmm {

namespace {

double sign(double x) { return (x > 0.0) - (x < 0.0); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vector prox_separable(const PenaltyKernel& kernel, double t, const Vector& u) {
  Vector out(u.size());
  for (long i = 0; i < u.size(); ++i) out[i] = scalar_prox(kernel, t, u[i]);
  return out;
}

}  // namespace

PenaltyKernel PenaltyKernel::firm(double zeta) {
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw ParameterError("firm penalty requires zeta > 0");
  }
  return PenaltyKernel(Kind::Firm, zeta);
}

std::string PenaltyKernel::name() const {
  switch (kind_) {
    case Kind::Hard:
      return "hard";
    case Kind::Soft:
      return "soft";
    case Kind::Firm:
      return "firm";
  }
  return "";
}

std::optional<double> PenaltyKernel::modulus() const {
  switch (kind_) {
    case Kind::Hard:
      return std::nullopt;
    case Kind::Soft:
      return 0.0;
    case Kind::Firm:
      return -1.0 / zeta_;
  }
  return std::nullopt;
}

double PenaltyKernel::value(double x) const {
  const double a = std::abs(x);
  switch (kind_) {
    case Kind::Hard:
      return x != 0.0 ? 1.0 : 0.0;
    case Kind::Soft:
      return a;
    case Kind::Firm:
      return a <= zeta_ ? a - x * x / (2.0 * zeta_) : zeta_ / 2.0;
  }
  return 0.0;
}

double scalar_prox(const PenaltyKernel& kernel, double t, double x) {
  if (!(t > 0.0)) throw ParameterError("scalar_prox: parameter t must be positive");
  const double a = std::abs(x);
  switch (kernel.kind()) {
    case PenaltyKernel::Kind::Hard:
      return a > std::sqrt(2.0 * t) ? x : 0.0;
    case PenaltyKernel::Kind::Soft:
      return a <= t ? 0.0 : sign(x) * (a - t);
    case PenaltyKernel::Kind::Firm: {
      const double zeta = kernel.zeta();
      if (!(t < zeta)) {
        throw ParameterError(
            fmt::format("firm prox requires t < zeta (got t = {}, zeta = {})", t, zeta));
      }
      if (a <= t) return 0.0;
      if (a < zeta) return sign(x) * (a - t) * zeta / (zeta - t);
      return x;
    }
  }
  return x;
}

ProxFunction ProxFunction::quadratic(Vector anchor) {
  require_finite(anchor, "quadratic anchor");
  return ProxFunction(Quadratic{std::move(anchor)});
}

ProxFunction ProxFunction::penalty(double omega, PenaltyKernel kernel) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw ParameterError("penalty weight omega must be finite and nonnegative");
  }
  return ProxFunction(SeparablePenalty{omega, kernel});
}

ProxFunction ProxFunction::shifted_penalty(double omega, PenaltyKernel kernel, double shift) {
  if (!(omega >= 0.0) || !std::isfinite(omega) || !std::isfinite(shift)) {
    throw ParameterError("shifted penalty needs finite omega >= 0 and finite shift");
  }
  return ProxFunction(ShiftedSeparable{omega, kernel, shift});
}

const Vector& ProxFunction::anchor() const {
  if (const auto* q = std::get_if<Quadratic>(&shape_)) return q->anchor;
  throw UnsupportedError("anchor() requires a quadratic function");
}

double ProxFunction::modulus() const {
  auto penalty_modulus = [](double omega, const PenaltyKernel& kernel) {
    const auto m = kernel.modulus();
    if (!m) {
      throw UnsupportedError(kernel.name() +
                             " penalty is not alpha-convex for any alpha; no modulus exists");
    }
    return omega * *m;
  };
  return std::visit(
      Overloaded{[](const Quadratic&) { return 1.0; },
                 [&](const SeparablePenalty& p) { return penalty_modulus(p.omega, p.kernel); },
                 [&](const ShiftedSeparable& p) {
                   return penalty_modulus(p.omega, p.kernel) - p.shift;
                 }},
      shape_);
}

double ProxFunction::value(const Vector& u) const {
  auto penalty_sum = [&](double omega, const PenaltyKernel& kernel) {
    double s = 0.0;
    for (long i = 0; i < u.size(); ++i) s += kernel.value(u[i]);
    return omega * s;
  };
  return std::visit(
      Overloaded{[&](const Quadratic& q) {
                   if (u.size() != q.anchor.size()) {
                     throw DimensionError("quadratic value", q.anchor.size(), u.size());
                   }
                   return 0.5 * (u - q.anchor).squaredNorm();
                 },
                 [&](const SeparablePenalty& p) { return penalty_sum(p.omega, p.kernel); },
                 [&](const ShiftedSeparable& p) {
                   return penalty_sum(p.omega, p.kernel) - 0.5 * p.shift * u.squaredNorm();
                 }},
      shape_);
}

double ProxFunction::max_prox_parameter() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  // t * omega < zeta for the firm kernel; 1 - t * shift > 0 for the shift.
  auto firm_bound = [&](double omega, const PenaltyKernel& k) {
    if (k.kind() != PenaltyKernel::Kind::Firm || omega == 0.0) return inf;
    return k.zeta() / omega;
  };
  return std::visit(
      Overloaded{[&](const Quadratic&) { return inf; },
                 [&](const SeparablePenalty& p) { return firm_bound(p.omega, p.kernel); },
                 [&](const ShiftedSeparable& p) {
                   const double shift_bound = p.shift > 0.0 ? 1.0 / p.shift : inf;
                   // t / (1 - t shift) * omega < zeta  <=>  t < zeta / (omega + zeta shift)
                   double firm = inf;
                   if (p.kernel.kind() == PenaltyKernel::Kind::Firm && p.omega > 0.0) {
                     const double denom = p.omega + p.kernel.zeta() * p.shift;
                     firm = denom > 0.0 ? p.kernel.zeta() / denom : inf;
                   }
                   return std::min(shift_bound, firm);
                 }},
      shape_);
}

Vector ProxFunction::prox(double t, const Vector& u) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ParameterError("prox: parameter t must be positive and finite");
  }
  return std::visit(
      Overloaded{
          [&](const Quadratic& q) -> Vector {
            if (u.size() != q.anchor.size()) {
              throw DimensionError("quadratic prox", q.anchor.size(), u.size());
            }
            return (u + t * q.anchor) / (1.0 + t);
          },
          [&](const SeparablePenalty& p) -> Vector {
            if (p.omega == 0.0) return u;
            return prox_separable(p.kernel, t * p.omega, u);
          },
          [&](const ShiftedSeparable& p) -> Vector {
            const double scale = 1.0 - t * p.shift;
            if (!(scale > 0.0)) {
              throw ParameterError(fmt::format(
                  "shifted prox requires 1 - t * shift > 0 (t = {}, shift = {})", t, p.shift));
            }
            const Vector scaled = u / scale;
            if (p.omega == 0.0) return scaled;
            return prox_separable(p.kernel, t / scale * p.omega, scaled);
          }},
      shape_);
}

}  // namespace aadmm
