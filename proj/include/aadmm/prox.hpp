#ifndef AADMM_PROX_HPP
#define AADMM_PROX_HPP

#include <optional>
#include <string>
#include <variant>

#include "aadmm/core.hpp"

namespace aadmm {

/// Scalar sparsity penalty p: R -> R_+ with a closed-form thresholding map.
///
///   Hard:  p(x) = [x != 0]
///   Soft:  p(x) = |x|
///   Firm:  p(x) = |x| - x^2 / (2 zeta) for |x| <= zeta, zeta / 2 otherwise
class PenaltyKernel {
 public:
  enum class Kind { Hard, Soft, Firm };

  static PenaltyKernel hard() { return PenaltyKernel(Kind::Hard, 0.0); }
  static PenaltyKernel soft() { return PenaltyKernel(Kind::Soft, 0.0); }
  static PenaltyKernel firm(double zeta);

  Kind kind() const { return kind_; }
  double zeta() const { return zeta_; }
  std::string name() const;

  /// Convexity modulus: 0 for soft, -1/zeta for firm, none for hard.
  std::optional<double> modulus() const;

  double value(double x) const;

 private:
  PenaltyKernel(Kind kind, double zeta) : kind_(kind), zeta_(zeta) {}

  Kind kind_;
  double zeta_;
};

/// prox_{t p}(x). Hard ties |x| = sqrt(2t) resolve to 0. Firm needs t < zeta.
double scalar_prox(const PenaltyKernel& kernel, double t, double x);

/// A proximable function together with its convexity modulus.
///
/// Three shapes cover everything the solvers need:
///  - Quadratic:         1/2 ||x - anchor||^2                      (modulus 1)
///  - SeparablePenalty:  omega * sum_i p(x_i)                      (omega * modulus(p))
///  - ShiftedSeparable:  omega * sum_i p(x_i) - (shift/2) ||x||^2  (omega * modulus(p) - shift)
class ProxFunction {
 public:
  struct Quadratic {
    Vector anchor;
  };
  struct SeparablePenalty {
    double omega;
    PenaltyKernel kernel;
  };
  struct ShiftedSeparable {
    double omega;
    PenaltyKernel kernel;
    double shift;
  };

  static ProxFunction quadratic(Vector anchor);
  static ProxFunction penalty(double omega, PenaltyKernel kernel);
  static ProxFunction shifted_penalty(double omega, PenaltyKernel kernel, double shift);

  const std::variant<Quadratic, SeparablePenalty, ShiftedSeparable>& shape() const {
    return shape_;
  }
  bool is_quadratic() const { return std::holds_alternative<Quadratic>(shape_); }
  const Vector& anchor() const;  // Quadratic only

  /// Throws UnsupportedError for hard-kerneled functions.
  double modulus() const;

  double value(const Vector& u) const;

  /// Largest t (exclusive) for which prox(t, .) is single valued; +inf if unbounded.
  double max_prox_parameter() const;

  Vector prox(double t, const Vector& u) const;

 private:
  explicit ProxFunction(std::variant<Quadratic, SeparablePenalty, ShiftedSeparable> s)
      : shape_(std::move(s)) {}

  std::variant<Quadratic, SeparablePenalty, ShiftedSeparable> shape_;
};

inline double modulus(const ProxFunction& fun) { return fun.modulus(); }
inline Vector prox(const ProxFunction& fun, double t, const Vector& u) {
  return fun.prox(t, u);
}

}  // namespace aadmm

#endif  // AADMM_PROX_HPP
