#include "nncalc/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nncalc {

Poly::Poly(RVec coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly(RVec{c}); }

Poly Poly::monomial(unsigned degree, const Rational& c) {
  RVec v(degree + 1);
  v[degree] = c;
  return Poly(std::move(v));
}

Poly Poly::linear(const Rational& slope, const Rational& offset) { return Poly(RVec{offset, slope}); }

void Poly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Rational Poly::operator()(const Rational& x) const {
  Rational acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

double Poly::eval_double(double x) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

long double Poly::eval_long_double(long double x) const {
  long double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + static_cast<long double>(to_double(*it));
  return acc;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  RVec out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(out));
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

Poly Poly::pow(unsigned e) const {
  Poly result = Poly::constant(1);
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

Poly Poly::compose_affine(const Rational& a, const Rational& b) const {
  // Horner in the polynomial ring: acc = acc*(a x + b) + c_i.
  Poly lin = Poly::linear(a, b);
  Poly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * lin;
    acc += Poly::constant(*it);
  }
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  RVec out(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return Poly(std::move(out));
}

Poly Poly::antiderivative() const {
  if (c_.empty()) return Poly();
  RVec out(c_.size() + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) out[i + 1] = c_[i] / Rational(static_cast<unsigned long>(i + 1));
  return Poly(std::move(out));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Rational inv = 1 / leading();
  return *this * inv;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  if (degree() < d.degree()) return {Poly(), *this};
  RVec rem = c_;
  RVec quot(c_.size() - d.c_.size() + 1);
  const Rational& lead = d.c_.back();
  for (int i = static_cast<int>(quot.size()) - 1; i >= 0; --i) {
    Rational q = rem[i + d.c_.size() - 1] / lead;
    quot[i] = q;
    if (sgn(q) == 0) continue;
    for (std::size_t j = 0; j < d.c_.size(); ++j) rem[i + j] -= q * d.c_[j];
  }
  rem.resize(d.c_.size() - 1);
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a.divmod(b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

Poly Poly::squarefree() const {
  if (degree() <= 1) return monic();
  Poly g = gcd(*this, derivative());
  if (g.degree() == 0) return monic();
  return divmod(g).first.monic();
}

RInterval eval_interval(const Poly& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) return {Rational(0), Rational(0)};
  const auto& c = p.coeffs();
  Rational rlo = c.back(), rhi = c.back();
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
    Rational a = rlo * lo, b = rlo * hi, e = rhi * lo, f = rhi * hi;
    rlo = std::min({a, b, e, f}) + c[i];
    rhi = std::max({a, b, e, f}) + c[i];
  }
  return {rlo, rhi};
}

SturmSequence::SturmSequence(const Poly& p) {
  seq_.push_back(p);
  if (p.degree() <= 0) return;
  seq_.push_back(p.derivative());
  while (true) {
    Poly r = seq_[seq_.size() - 2].divmod(seq_.back()).second;
    if (r.is_zero()) break;
    // Scale by a positive constant to keep coefficients tame; signs are preserved.
    Rational s = abs(r.leading());
    r = -(r * (1 / s));
    seq_.push_back(std::move(r));
  }
}

int SturmSequence::variations(const Rational& x) const {
  int changes = 0, last = 0;
  for (const auto& p : seq_) {
    int s = sgn(p(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int SturmSequence::variations_at_pos_inf() const {
  int changes = 0, last = 0;
  for (const auto& p : seq_) {
    if (p.is_zero()) continue;
    int s = sgn(p.leading());
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int SturmSequence::variations_at_neg_inf() const {
  int changes = 0, last = 0;
  for (const auto& p : seq_) {
    if (p.is_zero()) continue;
    int s = sgn(p.leading()) * ((p.degree() % 2 == 0) ? 1 : -1);
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Rational root_bound(const Poly& p) {
  if (p.degree() <= 0) return Rational(1);
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeff(i) / p.leading())));
  Rational bound = 1 + m;
  Rational b = 1;
  while (b <= bound) b *= 2;
  return b;
}

namespace {

bool perfect_square(const Rational& q, Rational& root) {
  if (sgn(q) < 0) return false;
  Integer n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

IsolatedRoot exact_root(const Poly& p, const Rational& x) { return IsolatedRoot{p, x, x, x}; }

// Roots of squarefree `s` in the open interval (lo, hi); s(lo), s(hi) nonzero.
void bisect(const Poly& s, const Rational& lo, const Rational& hi, std::vector<IsolatedRoot>& out) {
  if (s.degree() <= 0) return;
  if (s.degree() == 1) {
    Rational x = -s.coeff(0) / s.coeff(1);
    if (x > lo && x < hi) out.push_back(exact_root(s, x));
    return;
  }
  if (s.degree() == 2) {
    Rational a = s.coeff(2), b = s.coeff(1), c = s.coeff(0);
    Rational disc = b * b - 4 * a * c, r;
    if (sgn(disc) < 0) return;
    if (perfect_square(disc, r)) {
      Rational x1 = (-b - r) / (2 * a), x2 = (-b + r) / (2 * a);
      if (x1 > x2) std::swap(x1, x2);
      if (x1 > lo && x1 < hi) out.push_back(exact_root(s, x1));
      if (x2 > lo && x2 < hi && x2 != x1) out.push_back(exact_root(s, x2));
      return;
    }
  }
  SturmSequence sturm(s);
  struct Frame {
    Rational lo, hi;
  };
  std::vector<Frame> stack{{lo, hi}};
  std::vector<IsolatedRoot> found;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    int cnt = sturm.count(f.lo, f.hi);
    if (cnt == 0) continue;
    if (cnt == 1) {
      found.push_back(IsolatedRoot{s, f.lo, f.hi, std::nullopt});
      continue;
    }
    Rational mid = (f.lo + f.hi) / 2;
    if (sgn(s(mid)) == 0) {
      found.push_back(exact_root(s, mid));
      Poly reduced = s.divmod(Poly::linear(1, -mid)).first;
      std::vector<IsolatedRoot> left, right;
      bisect(reduced, f.lo, mid, left);
      bisect(reduced, mid, f.hi, right);
      found.insert(found.end(), left.begin(), left.end());
      found.insert(found.end(), right.begin(), right.end());
      continue;
    }
    stack.push_back({f.lo, mid});
    stack.push_back({mid, f.hi});
  }
  std::sort(found.begin(), found.end(), [](const IsolatedRoot& a, const IsolatedRoot& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.exact.has_value() && !b.exact.has_value();
  });
  out.insert(out.end(), found.begin(), found.end());
}

}  // namespace

std::vector<IsolatedRoot> isolate_real_roots(const Poly& p) {
  if (p.degree() <= 0) return {};
  Poly s = p.squarefree();
  Rational b = root_bound(s);
  std::vector<IsolatedRoot> out;
  bisect(s, -b, b, out);
  return out;
}

std::vector<IsolatedRoot> isolate_real_roots(const Poly& p, const Rational& a, const Rational& b) {
  if (p.degree() <= 0 || !(a < b)) return {};
  Poly s = p.squarefree();
  if (sgn(s(a)) == 0) s = s.divmod(Poly::linear(1, -a)).first;
  if (sgn(s(b)) == 0) s = s.divmod(Poly::linear(1, -b)).first;
  std::vector<IsolatedRoot> out;
  bisect(s, a, b, out);
  return out;
}

void refine(IsolatedRoot& root, const Rational& width) {
  if (root.exact) return;
  int slo = sgn(root.poly(root.lo));
  while (root.hi - root.lo > width) {
    Rational mid = (root.lo + root.hi) / 2;
    int sm = sgn(root.poly(mid));
    if (sm == 0) {
      root.lo = root.hi = mid;
      root.exact = mid;
      return;
    }
    if (sm == slo)
      root.lo = mid;
    else
      root.hi = mid;
  }
}

}  // namespace nncalc
