#pragma once

#include "nncalc/pwpoly.hpp"

#include <optional>
#include <vector>

namespace nncalc {

// A connected component of {f ≥ 1/2} (level 1) or {f < 1/2} (level 0).
// Missing ends are infinite.
struct CrossingComponent {
  std::optional<Real> lo, hi;
  bool lo_closed = false, hi_closed = false;
  int level = 0;
};

struct CrossingProfile {
  std::vector<CrossingComponent> components;
  std::size_t crossing_number = 0;
};

CrossingProfile crossing_profile(const PiecewisePoly& f);
std::size_t crossing_number(const PiecewisePoly& f);

// Fraction of the components I of f on which f̃ ≠ g̃ everywhere.
Rational disagreement_fraction(const PiecewisePoly& f, const PiecewisePoly& g);

// ½ (1 − 2 Cr(g)/Cr(f)).
Rational telgarsky_bound(std::size_t cr_f, std::size_t cr_g);

}  // namespace nncalc
