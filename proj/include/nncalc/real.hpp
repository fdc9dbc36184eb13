#pragma once

#include "nncalc/poly.hpp"

#include <memory>
#include <string>
#include <variant>

namespace nncalc {

// The unique root of a squarefree monic polynomial inside the open interval
// (lo, hi); poly(lo) and poly(hi) are nonzero with opposite signs.
struct Algebraic {
  Poly poly;
  Rational lo, hi;
};

// Exact real number: a rational or a real algebraic number. Values are
// immutable; refinement returns a new value.
class Real {
 public:
  Real() : v_(Rational(0)) {}
  Real(const Rational& q) : v_(q) {}  // NOLINT: implicit by design
  Real(long v) : v_(Rational(v)) {}   // NOLINT
  // Builds from an isolated root; rational roots collapse to Rational.
  static Real from_root(const IsolatedRoot& root);
  static Real from_algebraic(Poly poly, Rational lo, Rational hi);

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  const Algebraic& algebraic() const { return *std::get<std::shared_ptr<const Algebraic>>(v_); }

  // [q, q] for rationals, the isolating interval otherwise.
  RInterval enclosure() const;
  Real refined(const Rational& width) const;
  double to_double() const;

  Real operator-() const { return affine(-1, 0); }
  // a*x + b with a != 0.
  Real affine(const Rational& a, const Rational& b) const;

 private:
  std::variant<Rational, std::shared_ptr<const Algebraic>> v_;
};

// -1, 0, 1.
int compare(const Real& a, const Real& b);
inline bool operator<(const Real& a, const Real& b) { return compare(a, b) < 0; }
inline bool operator==(const Real& a, const Real& b) { return compare(a, b) == 0; }

// Sign of q evaluated at x.
int sign_at(const Poly& q, const Real& x);
// Enclosure of q(x); degenerate for rational x.
RInterval eval_enclosure(const Poly& q, const Real& x);

// Rational strictly between a < b.
Rational rational_between(const Real& a, const Real& b);
Rational rational_below(const Real& a);
Rational rational_above(const Real& a);

std::string to_string(const Real& x);

}  // namespace nncalc
