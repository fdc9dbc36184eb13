#include "nncalc/real.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nncalc {

namespace {

const Rational& default_width() {
  static const Rational w = Rational(1) / pow(Rational(2), 64);
  return w;
}

// Halve (lo, hi) until hi − lo ≤ width, keeping a sign change of p inside.
// Returns the exact root if a midpoint hits it.
std::optional<Rational> narrow(const Poly& p, Rational& lo, Rational& hi, const Rational& width) {
  int slo = sign(p(lo));
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    int sm = sign(p(mid));
    if (sm == 0) return mid;
    if (sm == slo) lo = mid;
    else hi = mid;
  }
  return std::nullopt;
}

}  // namespace

Real Real::from_root(const IsolatedRoot& root) {
  if (root.exact) return Real(*root.exact);
  return from_algebraic(root.poly, root.lo, root.hi);
}

Real Real::from_algebraic(Poly poly, Rational lo, Rational hi) {
  if (poly.degree() < 1) throw std::invalid_argument("algebraic number needs a nonconstant polynomial");
  poly = poly.monic();
  if (poly.degree() == 1) return Real(-poly.coeff(0));
  int slo = sign(poly(lo)), shi = sign(poly(hi));
  if (slo == 0 || shi == 0 || slo == shi) throw std::invalid_argument("interval does not isolate a sign change");
  if (auto exact = narrow(poly, lo, hi, default_width())) return Real(*exact);
  Real r;
  r.v_ = std::make_shared<const Algebraic>(Algebraic{std::move(poly), std::move(lo), std::move(hi)});
  return r;
}

RInterval Real::enclosure() const {
  if (is_rational()) return {rational(), rational()};
  const auto& a = algebraic();
  return {a.lo, a.hi};
}

Real Real::refined(const Rational& width) const {
  if (is_rational()) return *this;
  const auto& a = algebraic();
  if (a.hi - a.lo <= width) return *this;
  Rational lo = a.lo, hi = a.hi;
  if (auto exact = narrow(a.poly, lo, hi, width)) return Real(*exact);
  Real r;
  r.v_ = std::make_shared<const Algebraic>(Algebraic{a.poly, std::move(lo), std::move(hi)});
  return r;
}

double Real::to_double() const {
  if (is_rational()) return nncalc::to_double(rational());
  const auto& a = algebraic();
  return nncalc::to_double((a.lo + a.hi) / 2);
}

Real Real::affine(const Rational& a, const Rational& b) const {
  if (a == 0) throw std::invalid_argument("affine image needs a nonzero slope");
  if (is_rational()) return Real(a * rational() + b);
  const auto& al = algebraic();
  // y = a x + b  <=>  x = (y − b)/a
  Poly q = al.poly.compose_affine(1 / a, -b / a).monic();
  Rational lo = a * al.lo + b, hi = a * al.hi + b;
  if (a < 0) std::swap(lo, hi);
  Real r;
  r.v_ = std::make_shared<const Algebraic>(Algebraic{std::move(q), std::move(lo), std::move(hi)});
  return r;
}

namespace {

// Does the squarefree g (dividing the defining polynomials) vanish in the open
// interval (lo, hi)? g is nonzero at both endpoints by construction.
bool has_root_in(const Poly& g, const Rational& lo, const Rational& hi) {
  if (g.degree() < 1 || !(lo < hi)) return false;
  SturmSequence s(g);
  return s.count(lo, hi) > 0;
}

int compare_alg_rat(const Algebraic& a, const Rational& q) {
  if (q <= a.lo) return 1;
  if (q >= a.hi) return -1;
  int sq = sign(a.poly(q));
  if (sq == 0) return 0;
  // The root lies on the side where the sign changes.
  int slo = sign(a.poly(a.lo));
  return sq == slo ? -1 : 1;
}

}  // namespace

int compare(const Real& a, const Real& b) {
  if (a.is_rational() && b.is_rational()) {
    int c = cmp(a.rational(), b.rational());
    return (c > 0) - (c < 0);
  }
  if (a.is_rational()) return -compare_alg_rat(b.algebraic(), a.rational());
  if (b.is_rational()) return compare_alg_rat(a.algebraic(), b.rational());
  const Algebraic* x = &a.algebraic();
  const Algebraic* y = &b.algebraic();
  if (x->hi <= y->lo) return -1;
  if (y->hi <= x->lo) return 1;
  Poly g = gcd(x->poly, y->poly);
  Rational lo = std::max(x->lo, y->lo), hi = std::min(x->hi, y->hi);
  if (g.degree() >= 1 && has_root_in(g, lo, hi)) return 0;
  // Distinct: refine both until the intervals separate.
  Rational width = std::max<Rational>(x->hi - x->lo, y->hi - y->lo);
  Real ra = a, rb = b;
  for (;;) {
    width /= 4;
    ra = ra.refined(width);
    rb = rb.refined(width);
    RInterval ia = ra.enclosure(), ib = rb.enclosure();
    if (ra.is_rational() || rb.is_rational()) return compare(ra, rb);
    if (ia.hi <= ib.lo) return -1;
    if (ib.hi <= ia.lo) return 1;
  }
}

int sign_at(const Poly& q, const Real& x) {
  if (x.is_rational()) return sign(q(x.rational()));
  if (q.is_zero()) return 0;
  const auto& a = x.algebraic();
  Poly g = gcd(q, a.poly);
  if (g.degree() >= 1 && has_root_in(g, a.lo, a.hi)) return 0;
  Real r = x;
  Rational width = a.hi - a.lo;
  for (;;) {
    RInterval e = eval_interval(q, r.enclosure().lo, r.enclosure().hi);
    if (e.lo > 0) return 1;
    if (e.hi < 0) return -1;
    width /= 16;
    r = r.refined(width);
    if (r.is_rational()) return sign(q(r.rational()));
  }
}

RInterval eval_enclosure(const Poly& q, const Real& x) {
  if (x.is_rational()) {
    Rational v = q(x.rational());
    return {v, v};
  }
  return eval_interval(q, x.algebraic().lo, x.algebraic().hi);
}

Rational rational_between(const Real& a, const Real& b) {
  if (compare(a, b) >= 0) throw std::invalid_argument("rational_between needs a < b");
  Real ra = a, rb = b;
  for (;;) {
    RInterval ia = ra.enclosure(), ib = rb.enclosure();
    if (ia.hi < ib.lo) return between(ia.hi, ib.lo);
    if (ia.hi == ib.lo) {
      // Shared endpoint: it lies strictly between when neither is that value.
      if (!ra.is_rational() && !rb.is_rational()) return ia.hi;
    }
    Rational w = std::max<Rational>(ia.hi - ia.lo, ib.hi - ib.lo) / 4;
    if (w == 0) w = (ib.lo - ia.hi) / 4;
    ra = ra.refined(w);
    rb = rb.refined(w);
  }
}

Rational rational_below(const Real& a) { return floor(a.enclosure().lo) - 1; }
Rational rational_above(const Real& a) { return ceil(a.enclosure().hi) + 1; }

std::string to_string(const Real& x) {
  if (x.is_rational()) return to_string(x.rational());
  std::ostringstream os;
  os << "root(" << x.algebraic().poly.degree() << ") in (" << to_string(x.algebraic().lo) << ", "
     << to_string(x.algebraic().hi) << ")";
  return os.str();
}

}  // namespace nncalc
