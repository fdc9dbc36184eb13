#include "nncalc/calculus.hpp"
#include "nncalc/gadgets.hpp"

#include <stdexcept>

namespace nncalc {

namespace {

Rational hat(const Rational& y) {
  if (y <= 0 || y >= 1) return 0;
  return y <= Rational(1, 2) ? Rational(2 * y) : Rational(2 - 2 * y);
}

Rational two_pow(long e) {
  Integer p = 1;
  p <<= static_cast<unsigned long>(e < 0 ? -e : e);
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

}  // namespace

Rational sawtooth_eval(unsigned j, const Rational& x) {
  if (j == 0) return x <= 0 ? Rational(0) : (x >= 1 ? Rational(1) : x);
  if (x <= 0 || x >= 1) return 0;
  Rational t = x * two_pow(j - 1);
  Integer k = floor(t);
  return hat(t - k);
}

PiecewisePoly sawtooth_pw(unsigned j) {
  if (j == 0) return PiecewisePoly({Real(0), Real(1)}, {Poly(), Poly::linear(1, 0), Poly::constant(1)});
  Integer n = 1;
  n <<= j;  // 2^j affine pieces on [0, 1]
  Rational h = two_pow(-static_cast<long>(j));
  Rational slope = two_pow(j);
  std::vector<Real> b;
  std::vector<Poly> p{Poly()};
  for (Integer i = 0; i <= n; ++i) {
    Rational t = h * Rational(i);
    b.push_back(Real(t));
    if (i == n) {
      p.push_back(Poly());
    } else if (i % 2 == 0) {
      p.push_back(Poly::linear(slope, -slope * t));  // rising from 0
    } else {
      p.push_back(Poly::linear(-slope, 1 + slope * t));  // falling from 1
    }
  }
  return PiecewisePoly(std::move(b), std::move(p));
}

Network pw_affine_net(const PiecewisePoly& f) {
  if (f.max_degree() > 1) throw std::invalid_argument("pw_affine_net needs a piecewise affine function");
  if (!f.is_continuous()) throw std::invalid_argument("pw_affine_net needs a continuous function");
  for (const auto& b : f.breakpoints())
    if (!b.is_rational()) throw std::invalid_argument("pw_affine_net needs rational breakpoints");
  const auto& ps = f.pieces();
  Rational alpha = ps[0].coeff(1), beta = ps[0].coeff(0);
  std::vector<Entry> te, ue;
  RVec tb;
  std::size_t row = 0;
  if (alpha != 0) {
    te.push_back({row, 0, Rational(1)});
    tb.push_back(0);
    ue.push_back({0, row++, alpha});
    te.push_back({row, 0, Rational(-1)});
    tb.push_back(0);
    ue.push_back({0, row++, -alpha});
  }
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    Rational jump = ps[i + 1].coeff(1) - ps[i].coeff(1);
    if (jump == 0) continue;
    te.push_back({row, 0, Rational(1)});
    tb.push_back(-f.breakpoints()[i].rational());
    ue.push_back({0, row++, jump});
  }
  if (row == 0) {
    tb.push_back(0);
    row = 1;
  }
  Network net;
  net.layers.push_back({AffineMap(row, 1, std::move(te), std::move(tb)), std::vector<Activation>(row, Activation::rho(1))});
  net.layers.push_back({AffineMap(1, row, std::move(ue), RVec{beta}), {Activation::identity()}});
  return net;
}

Network sawtooth_net(const SawtoothSpec& spec) {
  if (spec.L < 2) throw std::invalid_argument("sawtooth_net needs L >= 2");
  if (spec.j < 1) throw std::invalid_argument("sawtooth_net needs j >= 1");
  if (spec.d < 1) throw std::invalid_argument("sawtooth_net needs d >= 1");
  Network net;
  if (spec.variant == SawtoothVariant::Neurons) {
    // j = k(L−1) + s: (L−2) blocks Δ_k then Δ_{k+s}, fused (depth L).
    unsigned k = spec.j / static_cast<unsigned>(spec.L - 1);
    unsigned s = spec.j % static_cast<unsigned>(spec.L - 1);
    Network block = pw_affine_net(sawtooth_pw(k));
    Network last = pw_affine_net(sawtooth_pw(k + s));
    if (spec.L == 2) {
      net = last;
    } else {
      net = block;
      for (std::size_t i = 1; i + 2 < spec.L; ++i) net = compose_fused(net, block);
      net = compose_fused(net, last);
    }
  } else {
    // κ = ⌊L/2⌋, j = kκ + s: (κ−1) blocks Δ_k then Δ_{k+s}, stacked (depth 2κ).
    unsigned kappa = static_cast<unsigned>(spec.L / 2);
    unsigned k = spec.j / kappa, s = spec.j % kappa;
    Network block = pw_affine_net(sawtooth_pw(k));
    Network last = pw_affine_net(sawtooth_pw(k + s));
    if (kappa == 1) {
      net = last;
    } else {
      net = block;
      for (unsigned i = 1; i + 1 < kappa; ++i) net = compose_stacked(net, block);
      net = compose_stacked(net, last);
    }
    if (spec.L % 2 == 1) net = deepen(net, 1);
  }
  if (spec.d > 1) net = pre_post_affine(net, AffineMap::selection(spec.d, {0}), AffineMap::identity(1));
  return net;
}

Integer sawtooth_constant(std::size_t L) {
  Integer p = 1;
  p <<= static_cast<unsigned long>(L - 1);
  return 4 * Integer(static_cast<unsigned long>(L)) + p;
}

bool within_sawtooth_budget(std::size_t count, std::size_t L, unsigned j, std::size_t den) {
  Integer lhs, rhs, c = sawtooth_constant(L);
  mpz_ui_pow_ui(lhs.get_mpz_t(), count, den);
  mpz_pow_ui(rhs.get_mpz_t(), c.get_mpz_t(), den);
  rhs <<= j;
  return lhs <= rhs;
}

}  // namespace nncalc
