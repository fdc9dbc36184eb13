#include "nncalc/norms.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nncalc {

namespace {

struct Span {
  Real lo, hi;
  const Poly* q;
};

// Pieces of f clipped to [a, b], in order.
std::vector<Span> spans(const PiecewisePoly& f, const Rational& a, const Rational& b) {
  std::vector<Span> out;
  if (!(a < b)) return out;
  const auto& br = f.breakpoints();
  const auto& ps = f.pieces();
  Real ra(a), rb(b);
  std::size_t k = f.piece_index(a);
  Real cur = ra;
  for (; k < ps.size(); ++k) {
    bool last = k == br.size() || compare(br[k], rb) >= 0;
    Real end = last ? rb : br[k];
    out.push_back({cur, end, &ps[k]});
    if (last) break;
    cur = end;
  }
  return out;
}

void add(RInterval& acc, const RInterval& v) {
  acc.lo += v.lo;
  acc.hi += v.hi;
}

// Enclosure of P(hi) − P(lo).
RInterval difference(const Poly& P, const Real& lo, const Real& hi) {
  RInterval h = eval_enclosure(P, hi), l = eval_enclosure(P, lo);
  return {h.lo - l.hi, h.hi - l.lo};
}

RInterval abs_enclosure(const RInterval& v) {
  if (v.lo >= 0) return v;
  if (v.hi <= 0) return {-v.hi, -v.lo};
  return {0, std::max<Rational>(-v.lo, v.hi)};
}

NormValue finish(RInterval power, double p) {
  NormValue out;
  out.exact = power.lo == power.hi;
  double mid = to_double((power.lo + power.hi) / 2);
  out.value = std::isinf(p) ? mid : std::pow(std::max(mid, 0.0), 1.0 / p);
  out.lo = std::move(power.lo);
  out.hi = std::move(power.hi);
  return out;
}

NormValue sup_norm(const PiecewisePoly& f, const Rational& a, const Rational& b) {
  RInterval best{0, 0};
  for (const auto& s : spans(f, a, b)) {
    std::vector<Real> cand{s.lo, s.hi};
    Poly d = s.q->derivative();
    if (!d.is_zero())
      for (auto& c : roots_between(d, &s.lo, &s.hi)) cand.push_back(std::move(c));
    for (const auto& c : cand) {
      RInterval v = abs_enclosure(eval_enclosure(*s.q, c));
      if (v.lo > best.lo) best.lo = v.lo;
      if (v.hi > best.hi) best.hi = v.hi;
    }
  }
  return finish(best, std::numeric_limits<double>::infinity());
}

NormValue integer_norm(const PiecewisePoly& f, unsigned p, const Rational& a, const Rational& b) {
  RInterval acc{0, 0};
  for (const auto& s : spans(f, a, b)) {
    if (s.q->is_zero()) continue;
    Poly qp = s.q->pow(p);
    Poly P = qp.antiderivative();
    if (p % 2 == 0) {
      add(acc, difference(P, s.lo, s.hi));
      continue;
    }
    std::vector<Real> cuts = roots_between(*s.q, &s.lo, &s.hi);
    const Real* lo = &s.lo;
    for (std::size_t i = 0; i <= cuts.size(); ++i) {
      const Real* hi = i < cuts.size() ? &cuts[i] : &s.hi;
      int sg = sign(s.q->operator()(point_between(lo, hi)));
      RInterval v = difference(P, *lo, *hi);
      if (sg < 0) v = {-v.hi, -v.lo};
      add(acc, v);
      lo = hi;
    }
  }
  if (acc.lo < 0) acc.lo = 0;
  return finish(acc, p);
}

NormValue quadrature_norm(const PiecewisePoly& f, double p, const Rational& a, const Rational& b) {
  using boost::math::quadrature::gauss_kronrod;
  const double tol = 1e-12;
  double total = 0;
  for (const auto& s : spans(f, a, b)) {
    if (s.q->is_zero()) continue;
    std::vector<Real> cuts = roots_between(*s.q, &s.lo, &s.hi);
    std::vector<double> nodes{s.lo.to_double()};
    for (const auto& c : cuts) nodes.push_back(c.to_double());
    nodes.push_back(s.hi.to_double());
    const Poly& q = *s.q;
    auto integrand = [&](double x) { return std::pow(std::fabs(static_cast<double>(q.eval_long_double(x))), p); };
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (!(nodes[i] < nodes[i + 1])) continue;
      if (q.degree() <= 1) {
        // No sign change inside: ∫|αx+β|^p = (|q(b)|^{p+1} − |q(a)|^{p+1}) / (|α|(p+1)) up to sign.
        double alpha = q.degree() == 1 ? q.coeff(1).get_d() : 0.0;
        double ya = std::fabs(q.eval_double(nodes[i])), yb = std::fabs(q.eval_double(nodes[i + 1]));
        if (alpha == 0)
          total += std::pow(ya, p) * (nodes[i + 1] - nodes[i]);
        else
          total += std::fabs(std::pow(yb, p + 1) - std::pow(ya, p + 1)) / (std::fabs(alpha) * (p + 1));
        continue;
      }
      double err = 0;
      total += gauss_kronrod<double, 61>::integrate(integrand, nodes[i], nodes[i + 1], 20, tol, &err);
    }
  }
  NormValue out;
  out.quadrature = true;
  out.rel_error = 1e-10;
  out.lo = out.hi = from_double(total);
  out.value = std::pow(total, 1.0 / p);
  return out;
}

}  // namespace

NormValue lp_norm(const PiecewisePoly& f, double p, const Rational& a, const Rational& b) {
  if (!(p > 0)) throw std::invalid_argument("p must be positive");
  if (!(a < b)) return finish({0, 0}, p);
  if (std::isinf(p)) return sup_norm(f, a, b);
  if (p == std::floor(p) && p <= 1024) return integer_norm(f, static_cast<unsigned>(p), a, b);
  return quadrature_norm(f, p, a, b);
}

NormValue lp_distance(const PiecewisePoly& f, const PiecewisePoly& g, double p, const Rational& a,
                      const Rational& b) {
  return lp_norm(f - g, p, a, b);
}

RInterval integral(const PiecewisePoly& f, const Rational& a, const Rational& b) {
  RInterval acc{0, 0};
  for (const auto& s : spans(f, a, b)) {
    if (s.q->is_zero()) continue;
    add(acc, difference(s.q->antiderivative(), s.lo, s.hi));
  }
  return acc;
}

}  // namespace nncalc
