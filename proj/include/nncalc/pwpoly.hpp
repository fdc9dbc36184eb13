#pragma once

#include "nncalc/json_io.hpp"
#include "nncalc/poly.hpp"
#include "nncalc/real.hpp"

#include <vector>

namespace nncalc {

// Exact univariate piecewise polynomial on ℝ. Piece k lives on the half-open
// interval [b_{k-1}, b_k) (b_{-1} = −∞, b_n = +∞), so the value at a breakpoint
// is taken from the piece on its right. Always normalized: breakpoints are
// strictly increasing and adjacent pieces differ.
class PiecewisePoly {
 public:
  PiecewisePoly() : pieces_{Poly()} {}
  explicit PiecewisePoly(Poly p) : pieces_{std::move(p)} {}
  // Throws std::invalid_argument unless pieces.size() == breaks.size() + 1 and
  // breaks are strictly increasing. Equal neighbours are merged.
  PiecewisePoly(std::vector<Real> breaks, std::vector<Poly> pieces);

  const std::vector<Real>& breakpoints() const { return breaks_; }
  const std::vector<Poly>& pieces() const { return pieces_; }
  std::size_t count_pieces() const { return pieces_.size(); }
  int max_degree() const;

  // Index of the piece containing x.
  std::size_t piece_index(const Rational& x) const;
  std::size_t piece_index(const Real& x) const;
  Rational operator()(const Rational& x) const { return pieces_[piece_index(x)](x); }
  double eval_double(double x) const;

  // Left and right limits agree at every breakpoint.
  bool is_continuous() const;

  // x ↦ f(a x + b), a ≠ 0.
  PiecewisePoly compose_affine(const Rational& a, const Rational& b) const;
  PiecewisePoly operator-() const { return scaled(-1); }
  PiecewisePoly scaled(const Rational& c) const;
  // ϱ_r ∘ f: split at the real roots of each piece, clamp negative parts.
  PiecewisePoly apply_rho(unsigned r) const;
  // Restriction to [a, b): zero outside.
  PiecewisePoly restricted(const Rational& a, const Rational& b) const;

  friend bool operator==(const PiecewisePoly& f, const PiecewisePoly& g);

 private:
  void normalize();
  std::vector<Real> breaks_;
  std::vector<Poly> pieces_;
};

// Distinct real roots of q strictly between lo and hi (nullptr for ±∞), ascending.
std::vector<Real> roots_between(const Poly& q, const Real* lo, const Real* hi);
// A rational strictly inside (lo, hi) (nullptr for ±∞).
Rational point_between(const Real* lo, const Real* hi);

struct PwTerm {
  Rational coeff;
  const PiecewisePoly* f;
};

// bias + Σ coeff_i f_i by a sweep over the merged breakpoints.
PiecewisePoly affine_combination(const std::vector<PwTerm>& terms, const Rational& bias = 0);
PiecewisePoly operator+(const PiecewisePoly& f, const PiecewisePoly& g);
PiecewisePoly operator-(const PiecewisePoly& f, const PiecewisePoly& g);

// Continuous piecewise-linear interpolant through (x_i, y_i) (x strictly
// increasing), extended by the constants y_0 and y_n.
PiecewisePoly linear_interpolant(const RVec& xs, const RVec& ys);

// {"breakpoints":[ "p/q" | {"poly":[...],"interval":["lo","hi"]} ], "pieces":[[coeffs...],...]}
Json to_json(const PiecewisePoly& f);

}  // namespace nncalc
