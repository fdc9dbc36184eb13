#pragma once

#include "nncalc/pwpoly.hpp"

namespace nncalc {

// For finite p, [lo, hi] encloses ∫_a^b |f|^p; for p = ∞ it encloses
// ess sup_{(a,b)} |f|. `value` is the norm itself (the p-th root for finite p).
struct NormValue {
  double value = 0;
  Rational lo, hi;
  bool exact = false;       // lo == hi is the exact p-th power (or sup)
  bool quadrature = false;  // non-integer p: lo, hi hold the quadrature estimate
  double rel_error = 0;     // reported quadrature tolerance
};

// p > 0 or p = +inf. Integer p are exact; others use adaptive Gauss–Kronrod.
NormValue lp_norm(const PiecewisePoly& f, double p, const Rational& a, const Rational& b);
NormValue lp_distance(const PiecewisePoly& f, const PiecewisePoly& g, double p, const Rational& a,
                      const Rational& b);

// ∫_a^b f exactly (rational breakpoints) or as an enclosure.
RInterval integral(const PiecewisePoly& f, const Rational& a, const Rational& b);

}  // namespace nncalc
