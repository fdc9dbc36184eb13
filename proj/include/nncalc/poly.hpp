#pragma once

#include "nncalc/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace nncalc {

// Dense univariate polynomial over Q, coefficients from low to high degree.
// The zero polynomial has no coefficients and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(RVec coeffs);
  static Poly constant(const Rational& c);
  static Poly monomial(unsigned degree, const Rational& c = 1);
  static Poly linear(const Rational& slope, const Rational& offset);  // slope*x + offset

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const RVec& coeffs() const { return c_; }
  Rational coeff(unsigned i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const;
  double eval_double(double x) const;
  long double eval_long_double(long double x) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Poly pow(unsigned e) const;
  // p(a*x + b)
  Poly compose_affine(const Rational& a, const Rational& b) const;
  Poly derivative() const;
  Poly antiderivative() const;  // zero constant term
  Poly monic() const;

  // Euclidean division: returns (quotient, remainder).
  std::pair<Poly, Poly> divmod(const Poly& d) const;
  friend Poly gcd(Poly a, Poly b);
  Poly squarefree() const;

 private:
  void trim();
  RVec c_;
};

// Rational interval [lo, hi], lo <= hi.
struct RInterval {
  Rational lo, hi;
  bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
  Rational mid() const { return (lo + hi) / 2; }
};

// Certified enclosure of p over [lo, hi] via interval Horner.
RInterval eval_interval(const Poly& p, const Rational& lo, const Rational& hi);

// Sturm sequence of a squarefree polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const Poly& p);
  // Sign variations at x (zeros skipped).
  int variations(const Rational& x) const;
  int variations_at_neg_inf() const;
  int variations_at_pos_inf() const;
  // Number of distinct roots in (a, b] for a < b.
  int count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }
  const Poly& base() const { return seq_.front(); }

 private:
  std::vector<Poly> seq_;
};

// Isolated real root of a squarefree polynomial: either an exact rational or
// an open interval (lo, hi) with p(lo), p(hi) nonzero of opposite sign.
struct IsolatedRoot {
  Poly poly;
  Rational lo, hi;
  std::optional<Rational> exact;
};

// Cauchy bound: all real roots lie strictly inside (-B, B).
Rational root_bound(const Poly& p);

// All distinct real roots of p (need not be squarefree), ascending.
std::vector<IsolatedRoot> isolate_real_roots(const Poly& p);

// Distinct roots in the open interval (a, b), ascending.
std::vector<IsolatedRoot> isolate_real_roots(const Poly& p, const Rational& a, const Rational& b);

// Bisect an isolating interval until its width is at most `width`.
void refine(IsolatedRoot& root, const Rational& width);

}  // namespace nncalc
