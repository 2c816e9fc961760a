#include "aadmm/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "aadmm/rng.hpp"

namespace aadmm {

Vector generate_block_signal(long n, std::uint64_t seed, int segments) {
  if (n < 2) throw ParameterError("block signal needs n >= 2");
  if (segments < 1) throw ParameterError("block signal needs at least one segment");
  RandomStream rng(derive_seed(seed, {0xB10C}));
  const long pieces = std::min<long>(segments, n);

  // Partial Fisher-Yates over candidate breakpoints 1..n-1.
  std::vector<long> candidates(static_cast<std::size_t>(n - 1));
  std::iota(candidates.begin(), candidates.end(), 1L);
  for (long i = 0; i < pieces - 1; ++i) {
    const auto j = i + static_cast<long>(rng.below(static_cast<std::uint64_t>(n - 1 - i)));
    std::swap(candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(j)]);
  }
  std::vector<long> breaks(candidates.begin(), candidates.begin() + (pieces - 1));
  std::sort(breaks.begin(), breaks.end());
  breaks.push_back(n);

  Vector signal(n);
  long begin = 0;
  double previous = std::nan("");
  for (const long end : breaks) {
    double level;
    do {
      level = rng.uniform(-5.0, 5.0);
    } while (level == previous);
    signal.segment(begin, end - begin).setConstant(level);
    previous = level;
    begin = end;
  }
  return signal;
}

Vector add_gaussian_noise(const Vector& signal, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("noise level sigma must be finite and nonnegative");
  }
  if (sigma == 0.0) return signal;
  RandomStream rng(derive_seed(seed, {0x9015E}));
  Vector out = signal;
  for (long i = 0; i < out.size(); ++i) out[i] += sigma * rng.normal();
  return out;
}

double mae(const Vector& x, const Vector& phi) {
  if (x.size() != phi.size()) throw DimensionError("mae", phi.size(), x.size());
  if (x.size() == 0) throw ParameterError("mae of empty vectors");
  return (x - phi).cwiseAbs().mean();
}

}  // namespace aadmm
