#include "nncalc/crossing.hpp"
#include "nncalc/extract.hpp"
#include "nncalc/gadgets.hpp"
#include "nncalc/norms.hpp"
#include "nncalc/random_net.hpp"

#include <doctest.h>

#include <cmath>

using namespace nncalc;

namespace {

Rational q(long p, long d = 1) {
  Rational v(p, d);
  v.canonicalize();
  return v;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  Poly x = Poly::monomial(1), one = Poly::constant(1);
  Poly p = (x + one) * (x - one);
  CHECK(p == Poly({q(-1), q(0), q(1)}));
  CHECK(p.compose_affine(2, 1) == Poly({q(0), q(4), q(4)}));
  auto [quo, rem] = p.divmod(x - one);
  CHECK(quo == x + one);
  CHECK(rem.is_zero());
  CHECK(gcd(p, x * x - one * 2 * x + one).monic() == (x - one).monic());
  CHECK(p.derivative() == x * 2);
  CHECK((Poly() - Poly()).degree() == -1);
}

TEST_CASE("real root isolation") {
  Poly p({q(-2), q(0), q(1)});  // x² − 2
  auto roots = isolate_real_roots(p);
  REQUIRE(roots.size() == 2);
  for (auto& r : roots) refine(r, q(1, 1 << 20));
  CHECK(std::fabs(roots[0].lo.get_d() + std::sqrt(2.0)) < 1e-5);
  CHECK(std::fabs(roots[1].lo.get_d() - std::sqrt(2.0)) < 1e-5);
  Poly w({q(-6), q(11), q(-6), q(1)});  // (x−1)(x−2)(x−3)
  auto r3 = isolate_real_roots(w * w);
  REQUIRE(r3.size() == 3);
  CHECK(isolate_real_roots(w, q(3, 2), q(3)).size() == 1);
  CHECK(isolate_real_roots(Poly({q(1), q(0), q(1)})).empty());
  SturmSequence s(w);
  CHECK(s.count(q(0), q(10)) == 3);
}

TEST_CASE("algebraic comparison") {
  Real r2 = Real::from_algebraic(Poly({q(-2), q(0), q(1)}), q(1), q(2));
  CHECK(compare(r2, Real(q(141421, 100000))) > 0);
  CHECK(compare(r2, Real(q(141422, 100000))) < 0);
  CHECK(compare(r2.affine(2, 0), Real::from_algebraic(Poly({q(-8), q(0), q(1)}), q(2), q(3))) == 0);
  CHECK(sign_at(Poly({q(-2), q(0), q(1)}), r2) == 0);
}

TEST_CASE("piecewise polynomial basics") {
  PiecewisePoly f({Real(q(0)), Real(q(1))}, {Poly(), Poly::monomial(1), Poly::constant(1)});
  CHECK(f.count_pieces() == 3);
  CHECK(f(q(1)) == 1);  // right piece at a breakpoint
  CHECK(f(q(1, 3)) == q(1, 3));
  CHECK(f.is_continuous());
  PiecewisePoly merged({Real(q(0)), Real(q(1))}, {Poly::monomial(1), Poly::monomial(1), Poly::constant(1)});
  CHECK(merged.count_pieces() == 2);
  CHECK_THROWS_AS(PiecewisePoly({Real(q(1)), Real(q(0))}, {Poly(), Poly(), Poly()}), std::invalid_argument);
  PiecewisePoly g = f.compose_affine(2, -1);  // f(2x − 1)
  CHECK(g(q(3, 4)) == q(1, 2));
  PiecewisePoly sq = (f - PiecewisePoly(Poly::constant(q(1, 2)))).apply_rho(2);
  CHECK(sq(q(3, 4)) == q(1, 16));
  CHECK(sq(q(1, 4)) == 0);
  PiecewisePoly r = PiecewisePoly(Poly({q(-2), q(0), q(1)})).apply_rho(1);  // ϱ(x² − 2)
  CHECK(r.count_pieces() == 3);
  CHECK_FALSE(r.breakpoints()[0].is_rational());
  CHECK(r(q(0)) == 0);
  CHECK(r(q(2)) == 2);
  PiecewisePoly step({Real(q(0))}, {Poly(), Poly::constant(1)});
  CHECK_FALSE(step.is_continuous());
}

TEST_CASE("extraction agrees with direct evaluation") {
  SplitMix64 rng(17);
  for (unsigned r : {1u, 2u, 3u}) {
    RandomNetSpec spec;
    spec.r = r;
    spec.max_L = r == 1 ? 5 : 3;
    for (int i = 0; i < 15; ++i) {
      Network n = random_network(spec, rng);
      PiecewisePoly f = extract_pieces(n);
      for (long k = -80; k <= 80; ++k) CHECK(f(q(k, 10)) == evaluate(n, {q(k, 10)})[0]);
      const auto& br = f.breakpoints();
      for (std::size_t p = 0; p < f.count_pieces(); ++p) {
        Rational x = point_between(p ? &br[p - 1] : nullptr, p < br.size() ? &br[p] : nullptr);
        CHECK(f.pieces()[p](x) == evaluate(n, {x})[0]);
      }
      auto c = complexity(n);
      CHECK(Integer(f.count_pieces()) <= piece_bound(c.W, c.N, c.L, r, BoundMode::Weights));
      CHECK(Integer(f.count_pieces()) <= piece_bound(c.W, c.N, c.L, r, BoundMode::Neurons));
    }
  }
  Network two;
  two.layers.push_back({AffineMap(1, 2, {{0, 0, 1}}, {0}), {Activation::identity()}});
  CHECK_THROWS_AS(extract_pieces(two), std::invalid_argument);
}

TEST_CASE("slices of multivariate networks") {
  Network m = mult_net(2, 2);
  auto s = extract_slice(m, {q(3), q(0)}, 1);  // y ↦ 3y
  REQUIRE(s.size() == 1);
  CHECK(s[0] == PiecewisePoly(Poly::linear(3, 0)));
}

TEST_CASE("piece-count constants") {
  CHECK(piece_constant(1, 1, BoundMode::Neurons) == 1);
  CHECK(piece_constant(2, 1, BoundMode::Neurons) == 16);
  CHECK(piece_constant(3, 1, BoundMode::Neurons) == 64);
  CHECK(piece_constant(2, 2, BoundMode::Neurons) == 24);
  for (std::size_t L = 2; L <= 6; ++L) {
    CHECK(piece_constant(L + 1, 2, BoundMode::Neurons) >= piece_constant(L, 2, BoundMode::Neurons));
    CHECK(piece_constant(L + 1, 1, BoundMode::Weights) >= piece_constant(L, 1, BoundMode::Weights));
  }
  CHECK(piece_bound(0, 0, 1, 1, BoundMode::Weights) >= 1);
  for (unsigned j = 1; j <= 8; ++j) {
    Network n = sawtooth_net({j, 1, SawtoothVariant::Neurons, 3});
    auto c = complexity(n);
    CHECK(Integer(2 + (1 << j)) <= piece_bound(c.W, c.N, c.L, 1, BoundMode::Neurons));
  }
}

TEST_CASE("crossing numbers") {
  CHECK(crossing_number(PiecewisePoly()) == 1);
  CHECK(crossing_number(PiecewisePoly(Poly::constant(1))) == 1);
  CHECK(crossing_number(sawtooth_pw(1)) == 3);
  CHECK(crossing_number(sawtooth_pw(3)) == 9);
  // x² crosses 1/2 twice at ±1/√2.
  PiecewisePoly sq(Poly::monomial(2));
  CrossingProfile p = crossing_profile(sq);
  CHECK(p.crossing_number == 3);
  CHECK(p.components[1].level == 0);
  CHECK_FALSE(p.components[1].lo->is_rational());
  // f = 1/2 exactly on [0, 1]: the level set is closed.
  PiecewisePoly flat({Real(q(0)), Real(q(1))}, {Poly(), Poly::constant(q(1, 2)), Poly()});
  CrossingProfile fp = crossing_profile(flat);
  CHECK(fp.crossing_number == 3);
  CHECK(fp.components[1].lo_closed);
}

TEST_CASE("disagreement fractions") {
  PiecewisePoly f = sawtooth_pw(1);
  CHECK(disagreement_fraction(f, PiecewisePoly()) == q(1, 3));
  CHECK(disagreement_fraction(f, f) == 0);
  CHECK(telgarsky_bound(3, 1) == q(1, 6));
  PiecewisePoly f3 = sawtooth_pw(3), f1 = sawtooth_pw(1);
  CHECK(disagreement_fraction(f3, f1) >= telgarsky_bound(9, 3));
}

TEST_CASE("norms by closed-form integration") {
  PiecewisePoly hat = sawtooth_pw(1);
  for (double p : {1.0, 2.0, 3.0}) {
    NormValue n = lp_norm(hat, p, 0, 1);
    CHECK(n.exact);
    CHECK(n.lo == Rational(1) / Rational(static_cast<long>(p) + 1));
    CHECK(n.value == doctest::Approx(std::pow(1 / (p + 1), 1 / p)));
  }
  NormValue inf = lp_norm(hat, INFINITY, 0, 1);
  CHECK(inf.lo == 1);
  CHECK(inf.hi == 1);
  NormValue frac = lp_norm(PiecewisePoly(Poly::monomial(1)), 1.5, 0, 1);
  CHECK(frac.quadrature);
  CHECK(frac.value == doctest::Approx(std::pow(1 / 2.5, 1 / 1.5)).epsilon(1e-9));
  CHECK(lp_norm(hat, 1, 1, 0).value == 0);
  RInterval i = integral(PiecewisePoly(Poly::monomial(2)), 0, 1);
  CHECK(i.lo == q(1, 3));
  // ∫_0^{√2} (x² − 2)... sign change at an algebraic point: |x² − 2| on [0, 2]
  // integrates to 8√2/3 − 4/3.
  NormValue a = lp_norm(PiecewisePoly(Poly({q(-2), q(0), q(1)})), 1, 0, 2);
  double want = 8 * std::sqrt(2.0) / 3 - 4.0 / 3;
  CHECK(a.lo.get_d() <= want + 1e-12);
  CHECK(a.hi.get_d() >= want - 1e-12);
  CHECK(lp_distance(hat, hat, 2, 0, 1).value == 0);
}
