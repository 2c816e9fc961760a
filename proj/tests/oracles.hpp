// Independent reference computations used by the tests. Nothing here calls
// into the library beyond plain vector types.
#ifndef AADMM_TESTS_ORACLES_HPP
#define AADMM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec random_vec(std::mt19937_64& rng, long n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vec v(n);
  for (long i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Explicit (n-1) x n forward difference matrix.
inline Mat difference_matrix(long n) {
  Mat d = Mat::Zero(n - 1, n);
  for (long i = 0; i + 1 < n; ++i) {
    d(i, i) = 1.0;
    d(i, i + 1) = -1.0;
  }
  return d;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(Mat a) {
  const long n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (long p = 0; p < n; ++p)
      for (long q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (long p = 0; p < n; ++p) {
      for (long q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (long k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (long k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (long i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double spectral_norm(const Mat& m) {
  const auto ev = jacobi_eigenvalues(m.transpose() * m);
  return std::sqrt(std::max(0.0, ev.back()));
}

/// argmin over an evenly spaced grid of a scalar function; returns (q, value).
inline std::pair<double, double> grid_min(const std::function<double(double)>& fn, double lo,
                                          double hi, long points) {
  double best_q = lo, best_v = std::numeric_limits<double>::infinity();
  for (long i = 0; i < points; ++i) {
    const double q = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = fn(q);
    if (v < best_v) {
      best_v = v;
      best_q = q;
    }
  }
  return {best_q, best_v};
}

// Scalar penalties written out directly from their definitions.
inline double pen_soft(double x) { return std::abs(x); }
inline double pen_hard(double x) { return x != 0.0 ? 1.0 : 0.0; }
inline double pen_firm(double x, double zeta) {
  const double a = std::abs(x);
  return a <= zeta ? a - x * x / (2.0 * zeta) : zeta / 2.0;
}

/// Soft-penalty 1-D TV denoising, min 1/2||x - b||^2 + omega ||Dx||_1, by
/// projected gradient on the dual: x = b - D^T u, |u_i| <= omega.
/// Returns the primal objective value at the recovered x.
struct TvResult {
  Vec x;
  double objective;
};

inline TvResult tv_dual_projected_gradient(const Vec& b, double omega, long steps) {
  const long n = b.size();
  const Mat d = difference_matrix(n);
  Vec u = Vec::Zero(n - 1);
  const double step = 1.0 / 4.0;  // 1/L with L = ||D||^2 < 4
  for (long k = 0; k < steps; ++k) {
    const Vec x = b - d.transpose() * u;
    u += step * (d * x);
    for (long i = 0; i < n - 1; ++i) u[i] = std::clamp(u[i], -omega, omega);
  }
  TvResult r;
  r.x = b - d.transpose() * u;
  r.objective = 0.5 * (r.x - b).squaredNorm() + omega * (d * r.x).lpNorm<1>();
  return r;
}

/// Textbook ADMM for min 1/2||x - b||^2 + omega||z||_1, Mx = z, written as
/// scaled-free straight-line code with an explicit matrix inverse.
struct AdmmTrajectory {
  std::vector<Vec> x, z, y;
};

inline AdmmTrajectory textbook_admm_l1(const Mat& m, const Vec& b, double omega, double rho,
                                       long steps) {
  const long n = m.cols(), rows = m.rows();
  const Mat lhs_inv = (Mat::Identity(n, n) + rho * m.transpose() * m).inverse();
  Vec x = Vec::Zero(n), z = Vec::Zero(rows), y = Vec::Zero(rows);
  AdmmTrajectory t;
  for (long k = 0; k < steps; ++k) {
    x = lhs_inv * (b + m.transpose() * (rho * z - y));
    const Vec v = m * x + y / rho;
    const double thr = omega / rho;
    for (long i = 0; i < rows; ++i) {
      const double a = std::abs(v[i]) - thr;
      z[i] = a > 0 ? std::copysign(a, v[i]) : 0.0;
    }
    y += rho * (m * x - z);
    t.x.push_back(x);
    t.z.push_back(z);
    t.y.push_back(y);
  }
  return t;
}

}  // namespace oracle

#endif  // AADMM_TESTS_ORACLES_HPP
