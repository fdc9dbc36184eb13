#include "nncalc/calculus.hpp"
#include "nncalc/extract.hpp"
#include "nncalc/gadgets.hpp"
#include "nncalc/random_net.hpp"

#include <doctest.h>

using namespace nncalc;

namespace {

Rational q(long p, long d = 1) {
  Rational v(p, d);
  v.canonicalize();
  return v;
}

Rational hat(const Rational& x) {
  if (x <= 0 || x >= 1) return 0;
  return x <= q(1, 2) ? Rational(2 * x) : Rational(2 - 2 * x);
}

Rational hat_power(unsigned j, Rational x) {
  for (unsigned i = 0; i < j; ++i) x = hat(x);
  return x;
}

// Cardinal B-spline of degree n on [0, n+1] by the Cox–de Boor recursion.
Rational cardinal_bspline(unsigned n, const Rational& x) {
  if (n == 0) return x >= 0 && x < 1 ? Rational(1) : Rational(0);
  return (x * cardinal_bspline(n - 1, x) + (n + 1 - x) * cardinal_bspline(n - 1, x - 1)) / n;
}

}  // namespace

TEST_CASE("sawtooth matches iterated hat") {
  for (unsigned j = 1; j <= 6; ++j) {
    Network a = sawtooth_net({j, 1, SawtoothVariant::Weights, 3});
    Network b = sawtooth_net({j, 1, SawtoothVariant::Neurons, 4});
    for (long k = -10; k <= 138; ++k) {
      Rational x = q(k, 128);
      Rational want = hat_power(j, x);
      CHECK(sawtooth_eval(j, x) == want);
      CHECK(evaluate(a, {x})[0] == want);
      CHECK(evaluate(b, {x})[0] == want);
    }
  }
  CHECK(sawtooth_eval(0, q(5, 2)) == 1);
  CHECK(sawtooth_eval(0, q(-1)) == 0);
}

TEST_CASE("sawtooth budget constants") {
  CHECK(sawtooth_constant(2) == 10);
  CHECK(sawtooth_constant(4) == 24);
  CHECK(within_sawtooth_budget(24 * 8, 4, 6, 2));
  CHECK_FALSE(within_sawtooth_budget(24 * 8 + 1, 4, 6, 2));
  // 2^{1/2}: 14 ≤ 10·√2 ≈ 14.14 < 15.
  CHECK(within_sawtooth_budget(14, 2, 1, 2));
  CHECK_FALSE(within_sawtooth_budget(15, 2, 1, 2));
}

TEST_CASE("continuous piecewise affine to network") {
  PiecewisePoly f = linear_interpolant({q(0), q(1, 3), q(2)}, {q(1), q(-2), q(5)});
  Network n = pw_affine_net(f);
  CHECK(extract_pieces(n) == f);
}

TEST_CASE("B-splines equal the Cox–de Boor recursion") {
  for (unsigned n = 1; n <= 4; ++n) {
    Network b = bspline_net(n);
    for (long k = -8; k <= 8 * static_cast<long>(n + 2); ++k) {
      Rational x = q(k, 8);
      CHECK(evaluate(b, {x})[0] == cardinal_bspline(n, x));
    }
  }
  CHECK_THROWS_AS(bspline_net(0), std::invalid_argument);
}

TEST_CASE("squashing functions") {
  for (long k = -4; k <= 12; ++k) {
    Rational x = q(k, 8);
    Rational clamp = x < 0 ? Rational(0) : (x > 1 ? Rational(1) : x);
    CHECK(evaluate(squash_net(1), {x})[0] == clamp);
    Rational s2 = x <= 0 ? Rational(0) : x >= 1 ? Rational(1) : x <= q(1, 2) ? Rational(2 * x * x) : Rational(1 - 2 * (1 - x) * (1 - x));
    CHECK(evaluate(squash_net(2), {x})[0] == s2);
  }
  for (unsigned r = 1; r <= 4; ++r) {
    CHECK(check_squashing(squash_net(r)));
    CHECK(satisfies_squashing(extract_pieces(squash_net(r))));
  }
  // |x| is not a squashing function.
  Network a;
  a.layers.push_back({AffineMap(2, 1, {{0, 0, 1}, {1, 0, -1}}, {0, 0}), {Activation::rho(1), Activation::rho(1)}});
  a.layers.push_back({AffineMap(1, 2, {{0, 0, 1}, {0, 1, 1}}, {0}), {Activation::identity()}});
  CHECK_FALSE(check_squashing(a));
  // 2σ overshoots.
  CHECK_FALSE(satisfies_squashing(extract_pieces(squash_net(2)).scaled(2)));
}

TEST_CASE("products") {
  SplitMix64 rng(4);
  for (std::size_t d = 2; d <= 5; ++d) {
    Network m = mult_net(d, 2);
    for (int i = 0; i < 30; ++i) {
      RVec x = random_point(rng, d);
      Rational p = 1;
      for (const auto& v : x) p *= v;
      CHECK(evaluate(m, x)[0] == p);
    }
  }
  Network m3 = mult_net(2, 3);
  CHECK(evaluate(m3, {q(-7, 3), q(5, 2)})[0] == q(-35, 6));
  CHECK_THROWS_AS(mult_net(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(mult_net(1, 2), std::invalid_argument);
  Network sv = scalar_vector_mult_net(3, 2);
  CHECK(evaluate(sv, {q(2), q(1), q(-3, 2), q(0)}) == RVec{q(2), q(-3), q(0)});
}

TEST_CASE("tensor B-splines") {
  Network t = tensor_bspline_net(2, 2);
  for (long a = -1; a <= 7; ++a)
    for (long b = -1; b <= 7; ++b) {
      Rational x = q(a, 2), y = q(b, 2);
      CHECK(evaluate(t, {x, y})[0] == cardinal_bspline(2, x) * cardinal_bspline(2, y));
    }
  Network one = tensor_bspline_net(1, 1);
  for (long a = -2; a <= 6; ++a) CHECK(evaluate(one, {q(a, 2)})[0] == cardinal_bspline(1, q(a, 2)));
  CHECK_THROWS_AS(tensor_bspline_net(2, 1), std::invalid_argument);
}

TEST_CASE("indicator of a general rectangle") {
  Rect rect{{q(-1), q(3)}, {q(0), q(1, 2)}};
  Rational eps = q(1, 8);
  for (unsigned r : {1u, 2u}) {
    IndicatorNet ind = indicator_net(2, rect, eps, squash_net(r));
    CHECK_FALSE(ind.shortcut);
    for (long a = -12; a <= 28; ++a)
      for (long b = -4; b <= 8; ++b) {
        Rational x = q(a, 4), y = q(b, 8);
        Rational v = evaluate(ind.net, {x, y})[0];
        bool outside = x < -1 || x > 3 || y < 0 || y > q(1, 2);
        bool core = x >= q(-1, 2) && x <= q(5, 2) && y >= q(1, 16) && y <= q(7, 16);
        if (outside) CHECK(v == 0);
        if (core) CHECK(v == 1);
        CHECK(v >= 0);
        CHECK(v <= 1);
      }
  }
  IndicatorNet one = indicator_net(1, {{q(0), q(1)}}, eps, squash_net(1));
  CHECK(one.shortcut);
  IndicatorNet gen = indicator_net(1, {{q(0), q(1)}}, eps, squash_net(1), IndicatorPath::General);
  CHECK_FALSE(gen.shortcut);
  for (long a = -4; a <= 12; ++a) CHECK(evaluate(one.net, {q(a, 8)}) == evaluate(gen.net, {q(a, 8)}));
  CHECK_THROWS_AS(indicator_net(1, {{q(0), q(1)}}, q(1, 2), squash_net(1)), std::invalid_argument);
  CHECK_THROWS_AS(indicator_net(2, {{q(0), q(1)}}, eps, squash_net(1)), std::invalid_argument);
  CHECK_THROWS_AS(indicator_net(1, {{q(1), q(1)}}, eps, squash_net(1)), std::invalid_argument);
}

TEST_CASE("localization") {
  Network g;  // (x, y) ↦ x − 2y + 3
  g.layers.push_back({AffineMap(1, 2, {{0, 0, 1}, {0, 1, -2}}, {q(3)}), {Activation::identity()}});
  g = deepen(g, 1);
  LocalizeNet loc = localize_net(g, q(1), q(1, 2), 2);
  CHECK(loc.net.depth() <= loc.depth_bound);
  for (long a = -8; a <= 8; ++a)
    for (long b = -8; b <= 8; ++b) {
      Rational x = q(a, 4), y = q(b, 4);
      Rational v = evaluate(loc.net, {x, y})[0], want = x - 2 * y + 3;
      if (abs(x) <= 1 && abs(y) <= 1) CHECK(v == want);
      if (abs(x) > q(3, 2) || abs(y) > q(3, 2)) CHECK(v == 0);
    }
  CHECK_THROWS_AS(localize_net(g, q(1), q(0), 2), std::invalid_argument);
  CHECK_THROWS_AS(localize_net(g, q(1), q(1), 1), std::invalid_argument);
}
