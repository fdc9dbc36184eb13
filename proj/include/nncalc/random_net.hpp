#pragma once

#include "nncalc/network.hpp"
#include "nncalc/pwpoly.hpp"

#include <cstdint>

namespace nncalc {

// SplitMix64. Child streams are derived by mixing the parent seed with a
// stream index, so trial t of a run with seed s always sees the same numbers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, n), n ≥ 1 (rejection sampling, no modulo bias).
  std::uint64_t below(std::uint64_t n);
  // Uniform in [lo, hi].
  long between(long lo, long hi);
  SplitMix64 split(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);

struct RandomNetSpec {
  std::size_t d_in = 1, d_out = 1;
  std::size_t max_W = 30;
  std::size_t max_L = 5;
  std::size_t min_L = 1;
  std::size_t max_width = 3;
  unsigned r = 1;
  // Probability (in percent) that a hidden neuron uses the identity.
  unsigned identity_percent = 0;
};

// Random sparse network with W ≤ max_W and min_L ≤ L ≤ max_L. Weights are
// ±p/q with 1 ≤ p ≤ 3, q ∈ {1, 2, 4}; biases may be zero.
Network random_network(const RandomNetSpec& spec, SplitMix64& rng);

// ±p/q, 0 ≤ p ≤ max_num (≥ 1 when nonzero), 1 ≤ q ≤ max_den.
Rational random_rational(SplitMix64& rng, long max_num, long max_den, bool nonzero = false);
// Point in [−8, 8]^d with denominators up to 16.
RVec random_point(SplitMix64& rng, std::size_t d);

// n pieces on [0, 1) with knots on the 2^{−10} grid, zero outside. Degree 1
// gives a continuous spline, higher degrees random polynomial pieces.
PiecewisePoly random_spline(SplitMix64& rng, std::size_t n, unsigned degree);

}  // namespace nncalc
