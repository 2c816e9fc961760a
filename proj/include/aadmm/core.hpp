#ifndef AADMM_CORE_HPP
#define AADMM_CORE_HPP

#include <optional>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "aadmm/errors.hpp"

namespace aadmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Throws ParameterError if any entry is NaN or infinite.
void require_finite(const Vector& v, const char* what);

/// The coupling map M of a constrained problem min f(x) + g(z), Mx = z.
///
/// Three representations are supported: an explicit dense matrix, the
/// (n-1) x n forward difference operator (Dx)_i = x_i - x_{i+1}, and the
/// identity. Instances are immutable; a known operator norm can be attached
/// with with_norm(), which returns a copy.
class LinearMap {
 public:
  enum class Kind { Dense, Difference, Identity };

  static LinearMap identity(long n);
  static LinearMap difference(long n);
  static LinearMap dense(Matrix entries);

  Kind kind() const { return kind_; }
  long rows() const;
  long cols() const { return cols_; }
  const Matrix& matrix() const;  // Dense only

  /// Materialises the map as a dense matrix (any kind).
  Matrix to_dense() const;

  std::optional<double> cached_norm() const { return cached_norm_; }
  LinearMap with_norm(double norm) const;

 private:
  LinearMap(Kind kind, long cols, Matrix entries)
      : kind_(kind), cols_(cols), entries_(std::move(entries)) {}

  Kind kind_;
  long cols_;
  Matrix entries_;
  std::optional<double> cached_norm_;
};

Vector apply(const LinearMap& map, const Vector& v);
Vector apply_transpose(const LinearMap& map, const Vector& v);

/// Spectral norm ||M||. Identity and Difference use closed forms; Dense runs
/// power iteration on M^T M from the normalised all-ones vector until the
/// eigen-residual drops below tol relative to the Rayleigh quotient.
double op_norm(const LinearMap& map, double tol = 1e-6);

/// Returns map.with_norm(op_norm(map, tol)) unless a norm is already cached.
LinearMap with_cached_norm(const LinearMap& map, double tol = 1e-6);

/// Solves (Id + c M^T M) x = rhs; c may be negative while the system stays positive definite.
///
/// The factorisation is computed once at construction so that repeated
/// solves (one per ADMM iteration) are cheap: Identity is a scaling,
/// Difference a tridiagonal Thomas sweep, Dense a Cholesky back-substitution.
class ShiftedNormalSolver {
 public:
  ShiftedNormalSolver(const LinearMap& map, double c);

  Vector solve(const Vector& rhs) const;
  double shift() const { return c_; }
  long size() const { return n_; }

 private:
  struct Tridiagonal {
    // Forward-eliminated coefficients of the symmetric tridiagonal system.
    Vector diag_inv;
    Vector upper_mod;
    double off = 0.0;
  };

  LinearMap::Kind kind_;
  long n_;
  double c_;
  std::variant<std::monostate, Tridiagonal, Eigen::LLT<Matrix>> factor_;
};

Vector solve_shifted_normal(const LinearMap& map, double c, const Vector& rhs);

}  // namespace aadmm

#endif  // AADMM_CORE_HPP
