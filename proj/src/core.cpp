#include "aadmm/core.hpp"

#include <cmath>
#include <numbers>

namespace aadmm {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw ParameterError(std::string(what) + ": entries must be finite");
  }
}

LinearMap LinearMap::identity(long n) {
  if (n < 1) throw ParameterError("identity map needs n >= 1");
  LinearMap map(Kind::Identity, n, Matrix());
  map.cached_norm_ = 1.0;
  return map;
}

LinearMap LinearMap::difference(long n) {
  if (n < 2) throw ParameterError("difference map needs signal length n >= 2");
  return LinearMap(Kind::Difference, n, Matrix());
}

LinearMap LinearMap::dense(Matrix entries) {
  if (entries.rows() < 1 || entries.cols() < 1) {
    throw ParameterError("dense map needs at least one row and one column");
  }
  if (!entries.allFinite()) {
    throw ParameterError("dense map: entries must be finite");
  }
  const long cols = entries.cols();
  return LinearMap(Kind::Dense, cols, std::move(entries));
}

long LinearMap::rows() const {
  switch (kind_) {
    case Kind::Dense:
      return entries_.rows();
    case Kind::Difference:
      return cols_ - 1;
    case Kind::Identity:
      return cols_;
  }
  return 0;
}

const Matrix& LinearMap::matrix() const {
  if (kind_ != Kind::Dense) throw UnsupportedError("matrix() requires a dense map");
  return entries_;
}

Matrix LinearMap::to_dense() const {
  switch (kind_) {
    case Kind::Dense:
      return entries_;
    case Kind::Identity:
      return Matrix::Identity(cols_, cols_);
    case Kind::Difference: {
      Matrix d = Matrix::Zero(cols_ - 1, cols_);
      for (long i = 0; i + 1 < cols_; ++i) {
        d(i, i) = 1.0;
        d(i, i + 1) = -1.0;
      }
      return d;
    }
  }
  return {};
}

LinearMap LinearMap::with_norm(double norm) const {
  if (!(norm >= 0.0) || !std::isfinite(norm)) {
    throw ParameterError("cached operator norm must be finite and nonnegative");
  }
  LinearMap copy = *this;
  copy.cached_norm_ = norm;
  return copy;
}

Vector apply(const LinearMap& map, const Vector& v) {
  if (v.size() != map.cols()) throw DimensionError("apply", map.cols(), v.size());
  switch (map.kind()) {
    case LinearMap::Kind::Identity:
      return v;
    case LinearMap::Kind::Dense:
      return map.matrix() * v;
    case LinearMap::Kind::Difference: {
      const long m = map.rows();
      return v.head(m) - v.tail(m);
    }
  }
  return {};
}

Vector apply_transpose(const LinearMap& map, const Vector& v) {
  if (v.size() != map.rows()) {
    throw DimensionError("apply_transpose", map.rows(), v.size());
  }
  switch (map.kind()) {
    case LinearMap::Kind::Identity:
      return v;
    case LinearMap::Kind::Dense:
      return map.matrix().transpose() * v;
    case LinearMap::Kind::Difference: {
      const long n = map.cols();
      const long m = n - 1;
      Vector out = Vector::Zero(n);
      out.head(m) += v;
      out.tail(m) -= v;
      return out;
    }
  }
  return {};
}

namespace {

constexpr int kPowerIterationCap = 200000;

double power_iteration_norm(const Matrix& m, double tol) {
  const Matrix gram = m.transpose() * m;
  if (gram.lpNorm<Eigen::Infinity>() == 0.0) return 0.0;
  const long n = gram.cols();

  Vector v = Vector::Ones(n).normalized();
  if ((gram * v).norm() <= 1e-14 * gram.norm()) {
    // All-ones lies in the kernel; fall back to a fixed non-symmetric start.
    for (long i = 0; i < n; ++i) v[i] = std::cos(static_cast<double>(i) + 1.0);
    v.normalize();
  }

  double rho = 0.0;
  for (int k = 0; k < kPowerIterationCap; ++k) {
    const Vector w = gram * v;
    rho = v.dot(w);
    const double residual = (w - rho * v).norm();
    if (residual <= tol * rho) return std::sqrt(rho);
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
  }
  throw ConvergenceError("op_norm: power iteration did not converge",
                         std::sqrt(std::max(rho, 0.0)));
}

}  // namespace

double op_norm(const LinearMap& map, double tol) {
  if (!(tol > 0.0)) throw ParameterError("op_norm: tol must be positive");
  if (const auto cached = map.cached_norm()) return *cached;
  switch (map.kind()) {
    case LinearMap::Kind::Identity:
      return 1.0;
    case LinearMap::Kind::Difference: {
      const double n = static_cast<double>(map.cols());
      return 2.0 * std::sin((n - 1.0) * std::numbers::pi / (2.0 * n));
    }
    case LinearMap::Kind::Dense:
      return power_iteration_norm(map.matrix(), tol);
  }
  return 0.0;
}

LinearMap with_cached_norm(const LinearMap& map, double tol) {
  if (map.cached_norm()) return map;
  return map.with_norm(op_norm(map, tol));
}

ShiftedNormalSolver::ShiftedNormalSolver(const LinearMap& map, double c)
    : kind_(map.kind()), n_(map.cols()), c_(c) {
  // Negative shifts are allowed as long as Id + c M^T M stays positive definite.
  if (!std::isfinite(c)) throw ParameterError("shifted normal solve requires a finite shift");
  switch (kind_) {
    case LinearMap::Kind::Identity:
      if (!(1.0 + c > 0.0)) throw ParameterError("Id + c M^T M is not positive definite");
      break;
    case LinearMap::Kind::Difference: {
      Tridiagonal t;
      t.off = -c;
      t.diag_inv.resize(n_);
      t.upper_mod.resize(n_);
      for (long i = 0; i < n_; ++i) {
        const double coupling = (i == 0 || i == n_ - 1) ? 1.0 : 2.0;
        double d = 1.0 + c * coupling;
        if (i > 0) d -= t.off * t.upper_mod[i - 1];
        if (!(d > 0.0)) throw ParameterError("Id + c M^T M is not positive definite");
        t.diag_inv[i] = 1.0 / d;
        t.upper_mod[i] = t.off / d;
      }
      factor_ = std::move(t);
      break;
    }
    case LinearMap::Kind::Dense: {
      const Matrix& m = map.matrix();
      Matrix a = Matrix::Identity(n_, n_);
      a.noalias() += c * (m.transpose() * m);
      Eigen::LLT<Matrix> llt(a);
      if (llt.info() != Eigen::Success) throw ParameterError("Id + c M^T M is not positive definite");
      factor_ = std::move(llt);
      break;
    }
  }
}

Vector ShiftedNormalSolver::solve(const Vector& rhs) const {
  if (rhs.size() != n_) throw DimensionError("solve_shifted_normal", n_, rhs.size());
  switch (kind_) {
    case LinearMap::Kind::Identity:
      return rhs / (1.0 + c_);
    case LinearMap::Kind::Difference: {
      const auto& t = std::get<Tridiagonal>(factor_);
      Vector x(n_);
      x[0] = rhs[0] * t.diag_inv[0];
      for (long i = 1; i < n_; ++i) {
        x[i] = (rhs[i] - t.off * x[i - 1]) * t.diag_inv[i];
      }
      for (long i = n_ - 2; i >= 0; --i) x[i] -= t.upper_mod[i] * x[i + 1];
      return x;
    }
    case LinearMap::Kind::Dense:
      return std::get<Eigen::LLT<Matrix>>(factor_).solve(rhs);
  }
  return {};
}

Vector solve_shifted_normal(const LinearMap& map, double c, const Vector& rhs) {
  return ShiftedNormalSolver(map, c).solve(rhs);
}

}  // namespace aadmm
