#ifndef AADMM_SIGNAL_HPP
#define AADMM_SIGNAL_HPP

#include <cstdint>

#include "aadmm/core.hpp"

namespace aadmm {

struct SignalSpec {
  long n = 256;
  double sigma = 0.5;
  std::uint64_t seed = 1;
};

/// Piecewise-constant signal with min(segments, n) pieces. Breakpoints are a
/// seeded sample of distinct positions; levels are uniform in [-5, 5].
Vector generate_block_signal(long n, std::uint64_t seed, int segments = 11);

/// signal + sigma * N(0, 1) draws; sigma = 0 returns the input unchanged.
Vector add_gaussian_noise(const Vector& signal, double sigma, std::uint64_t seed);

/// Mean absolute error (1/n) sum |x_i - phi_i|.
double mae(const Vector& x, const Vector& phi);

}  // namespace aadmm

#endif  // AADMM_SIGNAL_HPP
