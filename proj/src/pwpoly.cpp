#include "nncalc/pwpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace nncalc {

PiecewisePoly::PiecewisePoly(std::vector<Real> breaks, std::vector<Poly> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (pieces_.size() != breaks_.size() + 1)
    throw std::invalid_argument("piecewise polynomial needs one more piece than breakpoints");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (compare(breaks_[i - 1], breaks_[i]) >= 0)
      throw std::invalid_argument("breakpoints must be strictly increasing");
  normalize();
}

void PiecewisePoly::normalize() {
  std::vector<Real> b;
  std::vector<Poly> p;
  b.reserve(breaks_.size());
  p.reserve(pieces_.size());
  p.push_back(std::move(pieces_[0]));
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (pieces_[i + 1] == p.back()) continue;
    b.push_back(std::move(breaks_[i]));
    p.push_back(std::move(pieces_[i + 1]));
  }
  breaks_ = std::move(b);
  pieces_ = std::move(p);
}

int PiecewisePoly::max_degree() const {
  int d = -1;
  for (const auto& p : pieces_) d = std::max(d, p.degree());
  return d;
}

std::size_t PiecewisePoly::piece_index(const Rational& x) const {
  // Number of breakpoints ≤ x.
  std::size_t lo = 0, hi = breaks_.size();
  Real rx(x);
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (compare(breaks_[mid], rx) <= 0) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

std::size_t PiecewisePoly::piece_index(const Real& x) const {
  std::size_t lo = 0, hi = breaks_.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (compare(breaks_[mid], x) <= 0) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

double PiecewisePoly::eval_double(double x) const {
  std::size_t lo = 0, hi = breaks_.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (breaks_[mid].to_double() <= x) lo = mid + 1;
    else hi = mid;
  }
  return static_cast<double>(pieces_[lo].eval_long_double(x));
}

bool PiecewisePoly::is_continuous() const {
  for (std::size_t i = 0; i < breaks_.size(); ++i)
    if (sign_at(pieces_[i + 1] - pieces_[i], breaks_[i]) != 0) return false;
  return true;
}

PiecewisePoly PiecewisePoly::compose_affine(const Rational& a, const Rational& b) const {
  if (a == 0) throw std::invalid_argument("compose_affine needs a nonzero slope");
  // f(a x + b) breaks where a x + b = t, i.e. x = (t − b)/a.
  std::vector<Real> nb;
  std::vector<Poly> np;
  nb.reserve(breaks_.size());
  for (const auto& t : breaks_) nb.push_back(t.affine(1 / a, -b / a));
  for (const auto& p : pieces_) np.push_back(p.compose_affine(a, b));
  if (a < 0) {
    std::reverse(nb.begin(), nb.end());
    std::reverse(np.begin(), np.end());
  }
  PiecewisePoly out;
  out.breaks_ = std::move(nb);
  out.pieces_ = std::move(np);
  return out;
}

PiecewisePoly PiecewisePoly::scaled(const Rational& c) const {
  if (c == 0) return PiecewisePoly();
  PiecewisePoly out = *this;
  for (auto& p : out.pieces_) p *= c;
  return out;
}

std::vector<Real> roots_between(const Poly& q, const Real* lo, const Real* hi) {
  std::vector<Real> out;
  if (q.degree() <= 0) return out;
  if (q.degree() == 1) {
    Real x(-q.coeff(0) / q.coeff(1));
    if ((!lo || compare(*lo, x) < 0) && (!hi || compare(x, *hi) < 0)) out.push_back(x);
    return out;
  }
  Rational bound = root_bound(q);
  Rational a = lo ? lo->enclosure().lo : -bound;
  Rational b = hi ? hi->enclosure().hi : bound;
  bool exact_ends = (!lo || lo->is_rational()) && (!hi || hi->is_rational());
  if (a >= b) return out;
  for (const auto& r : isolate_real_roots(q, a, b)) {
    Real x = Real::from_root(r);
    if (!exact_ends) {
      if (lo && compare(*lo, x) >= 0) continue;
      if (hi && compare(x, *hi) >= 0) continue;
    }
    out.push_back(std::move(x));
  }
  return out;
}

Rational point_between(const Real* lo, const Real* hi) {
  if (lo && hi) return rational_between(*lo, *hi);
  if (lo) return rational_above(*lo);
  if (hi) return rational_below(*hi);
  return 0;
}

PiecewisePoly PiecewisePoly::apply_rho(unsigned r) const {
  if (r == 0) throw std::invalid_argument("rho degree must be positive");
  std::vector<Real> nb;
  std::vector<Poly> np;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const Real* lo = k > 0 ? &breaks_[k - 1] : nullptr;
    const Real* hi = k < breaks_.size() ? &breaks_[k] : nullptr;
    if (lo) nb.push_back(*lo);
    const Poly& q = pieces_[k];
    std::vector<Real> cuts = roots_between(q, lo, hi);
    const Real* a = lo;
    Poly qr;
    bool qr_ready = false;
    for (std::size_t s = 0; s <= cuts.size(); ++s) {
      const Real* b = s < cuts.size() ? &cuts[s] : hi;
      int sg = q.degree() <= 0 ? sign(q.coeff(0)) : sign(q(point_between(a, b)));
      if (sg > 0) {
        if (!qr_ready) {
          qr = r == 1 ? q : q.pow(r);
          qr_ready = true;
        }
        np.push_back(qr);
      } else {
        np.push_back(Poly());
      }
      if (s < cuts.size()) nb.push_back(cuts[s]);
      a = b;
    }
  }
  PiecewisePoly out;
  out.breaks_ = std::move(nb);
  out.pieces_ = std::move(np);
  out.normalize();
  return out;
}

PiecewisePoly PiecewisePoly::restricted(const Rational& a, const Rational& b) const {
  if (!(a < b)) return PiecewisePoly();
  std::vector<Real> nb{Real(a)};
  std::vector<Poly> np{Poly()};
  Real ra(a), rb(b);
  np.push_back(pieces_[piece_index(a)]);
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (compare(breaks_[i], ra) <= 0 || compare(breaks_[i], rb) >= 0) continue;
    nb.push_back(breaks_[i]);
    np.push_back(pieces_[i + 1]);
  }
  nb.push_back(rb);
  np.push_back(Poly());
  PiecewisePoly out;
  out.breaks_ = std::move(nb);
  out.pieces_ = std::move(np);
  out.normalize();
  return out;
}

bool operator==(const PiecewisePoly& f, const PiecewisePoly& g) {
  if (f.pieces_ != g.pieces_ || f.breaks_.size() != g.breaks_.size()) return false;
  for (std::size_t i = 0; i < f.breaks_.size(); ++i)
    if (compare(f.breaks_[i], g.breaks_[i]) != 0) return false;
  return true;
}

namespace {

struct Event {
  const Real* x;
  std::size_t term;
  std::size_t piece;  // index of the piece starting at x
};

bool all_rational(const std::vector<PwTerm>& terms) {
  for (const auto& t : terms)
    for (const auto& b : t.f->breakpoints())
      if (!b.is_rational()) return false;
  return true;
}

}  // namespace

PiecewisePoly affine_combination(const std::vector<PwTerm>& terms, const Rational& bias) {
  std::vector<Event> events;
  Poly running = Poly::constant(bias);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff == 0) continue;
    const auto& f = *terms[i].f;
    running += f.pieces()[0] * terms[i].coeff;
    for (std::size_t k = 0; k < f.breakpoints().size(); ++k) events.push_back({&f.breakpoints()[k], i, k + 1});
  }
  if (all_rational(terms)) {
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.x->rational() < b.x->rational(); });
  } else {
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return compare(*a.x, *b.x) < 0; });
  }
  std::vector<Real> breaks;
  std::vector<Poly> pieces{running};
  for (std::size_t s = 0; s < events.size();) {
    std::size_t e = s;
    while (e < events.size() && compare(*events[e].x, *events[s].x) == 0) {
      const auto& t = terms[events[e].term];
      const auto& ps = t.f->pieces();
      running += (ps[events[e].piece] - ps[events[e].piece - 1]) * t.coeff;
      ++e;
    }
    breaks.push_back(*events[s].x);
    pieces.push_back(running);
    s = e;
  }
  return PiecewisePoly(std::move(breaks), std::move(pieces));
}

PiecewisePoly operator+(const PiecewisePoly& f, const PiecewisePoly& g) {
  return affine_combination({{1, &f}, {1, &g}});
}

PiecewisePoly operator-(const PiecewisePoly& f, const PiecewisePoly& g) {
  return affine_combination({{1, &f}, {-1, &g}});
}

PiecewisePoly linear_interpolant(const RVec& xs, const RVec& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw std::invalid_argument("interpolant needs matching nonempty data");
  std::vector<Real> b;
  std::vector<Poly> p{Poly::constant(ys.front())};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    b.push_back(Real(xs[i]));
    if (i + 1 < xs.size()) {
      Rational slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
      p.push_back(Poly::linear(slope, ys[i] - slope * xs[i]));
    } else {
      p.push_back(Poly::constant(ys.back()));
    }
  }
  return PiecewisePoly(std::move(b), std::move(p));
}

Json to_json(const PiecewisePoly& f) {
  Json breaks = Json::array();
  for (const auto& b : f.breakpoints()) {
    if (b.is_rational()) {
      breaks.push_back(to_string(b.rational()));
    } else {
      Json poly = Json::array();
      for (const auto& c : b.algebraic().poly.coeffs()) poly.push_back(to_string(c));
      breaks.push_back({{"poly", poly}, {"interval", {to_string(b.algebraic().lo), to_string(b.algebraic().hi)}}});
    }
  }
  Json pieces = Json::array();
  for (const auto& p : f.pieces()) {
    Json c = Json::array();
    for (const auto& v : p.coeffs()) c.push_back(to_string(v));
    pieces.push_back(c);
  }
  return {{"breakpoints", breaks}, {"pieces", pieces}};
}

}  // namespace nncalc
