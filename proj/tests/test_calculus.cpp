#include "nncalc/calculus.hpp"
#include "nncalc/custom.hpp"
#include "nncalc/gadgets.hpp"
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

// x ↦ |x| as ϱ(x) + ϱ(−x).
Network abs_net() {
  Network n;
  n.layers.push_back({AffineMap(2, 1, {{0, 0, 1}, {1, 0, -1}}, {0, 0}), {Activation::rho(1), Activation::rho(1)}});
  n.layers.push_back({AffineMap(1, 2, {{0, 0, 1}, {0, 1, 1}}, {0}), {Activation::identity()}});
  return n;
}

// (x, y) ↦ (ϱ_2(x + y), x − y) with a mixed hidden layer.
Network mixed_net() {
  Network n;
  n.layers.push_back({AffineMap(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, -1}}, {0, 0}),
                      {Activation::rho(2), Activation::identity()}});
  n.layers.push_back({AffineMap::identity(2), {Activation::identity(), Activation::identity()}});
  return n;
}

std::vector<RVec> grid2() {
  std::vector<RVec> pts;
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) pts.push_back({q(a, 2), q(b, 3)});
  return pts;
}

}  // namespace

TEST_CASE("deepen appends identity layers and adds c·L0 to W and N") {
  Network n = abs_net();
  Network d = deepen(n, 3);
  auto c = complexity(d);
  CHECK(c.L == 5);
  CHECK(c.W == 4 + 3);
  CHECK(c.N == 2 + 3);
  for (long x = -5; x <= 5; ++x) CHECK(evaluate(d, {q(x, 2)}) == RVec{abs(q(x, 2))});
  CHECK(complexity(deepen(n, 0)).W == 4);
}

TEST_CASE("scale and sum") {
  Network n = abs_net();
  Network s = scale(n, q(-3, 2));
  CHECK(evaluate(s, {q(-2)}) == RVec{q(-3)});
  Network z = scale(n, 0);
  CHECK(evaluate(z, {q(7)}) == RVec{q(0)});
  Network t = sum({n, n, deepen(n, 1)});
  CHECK(evaluate(t, {q(-1, 3)}) == RVec{q(1)});
  auto c = complexity(t);
  CHECK(c.L == 3);
  CHECK(c.W <= 4 + 4 + 5 + 1 * (3 - 2));
}

TEST_CASE("cartesian stacks outputs in input order") {
  Network a = abs_net(), b = deepen(abs_net(), 2);
  Network c = cartesian({b, a});
  CHECK(c.d_out() == 2);
  CHECK(evaluate(c, {q(-5, 4)}) == RVec{q(5, 4), q(5, 4)});
  auto cc = complexity(c);
  CHECK(cc.L == 4);
  CHECK(cc.W <= 6 + 4 + 1 * 2);
}

TEST_CASE("block_parallel acts on separate inputs") {
  Network bp = block_parallel({abs_net(), scale(abs_net(), 2)});
  CHECK(bp.d_in() == 2);
  CHECK(evaluate(bp, {q(-1), q(3)}) == RVec{q(1), q(6)});
}

TEST_CASE("pre_post_affine") {
  Network n = abs_net();
  AffineMap P(1, 2, {{0, 0, 1}, {0, 1, -1}}, {q(1)});
  AffineMap Q(2, 1, {{0, 0, 2}, {1, 0, -1}}, {q(0), q(5)});
  Network m = pre_post_affine(n, P, Q);
  for (const auto& x : grid2()) {
    Rational u = abs(x[0] - x[1] + 1);
    CHECK(evaluate(m, x) == RVec{2 * u, 5 - u});
  }
  auto c = complexity(m);
  CHECK(c.W <= Q.l0_col_max() * 4 * P.l0_row_max());
  Network k = pre_post_affine(n, P, AffineMap(1, 1, {}, {q(3)}));
  CHECK(complexity(k).W == 0);
  CHECK(evaluate(k, {q(1), q(1)}) == RVec{q(3)});
}

TEST_CASE("stacked and fused composition") {
  Network f = mixed_net();
  AffineMap P(1, 2, {{0, 0, 1}, {0, 1, 1}}, {q(-1)});
  Network g = pre_post_affine(abs_net(), P, AffineMap::identity(1));
  Network s = compose_stacked(f, g), u = compose_fused(f, g);
  auto cf = complexity(f), cg = complexity(g), cs = complexity(s), cu = complexity(u);
  CHECK(cs.L == cf.L + cg.L);
  CHECK(cs.N == cf.N + cg.N + 2);
  CHECK(cs.W == cf.W + cg.W);
  CHECK(cu.L == cf.L + cg.L - 1);
  CHECK(cu.N == cf.N + cg.N);
  CHECK(cu.W <= cf.W + std::max<std::size_t>(cf.N, 2) * cg.W);
  for (const auto& x : grid2()) {
    Rational s2 = x[0] + x[1];
    Rational want = abs((s2 > 0 ? s2 * s2 : Rational(0)) + (x[0] - x[1]) - 1);
    CHECK(evaluate(s, x) == RVec{want});
    CHECK(evaluate(u, x) == RVec{want});
  }
  CHECK_THROWS_AS(compose_fused(abs_net(), f), std::invalid_argument);
}

TEST_CASE("polynomial representation") {
  for (unsigned r = 1; r <= 4; ++r) {
    RVec coeffs;
    for (unsigned i = 0; i <= r; ++i) coeffs.push_back(q(static_cast<long>(i) - 2, static_cast<long>(i) + 1));
    Network p = represent_polynomial(coeffs, r);
    CHECK(is_strict(p));
    CHECK(complexity(p).L == 2);
    for (long x = -6; x <= 6; ++x) {
      Rational xv = q(x, 3), want = 0, pw = 1;
      for (const auto& c : coeffs) want += c * pw, pw *= xv;
      CHECK(evaluate(p, {xv}) == RVec{want});
    }
  }
  CHECK_THROWS_AS(represent_polynomial({1, 2, 3}, 1), std::invalid_argument);
  Network c = represent_polynomial({q(5)}, 2);
  CHECK(evaluate(c, {q(100)}) == RVec{q(5)});
}

TEST_CASE("identity representations") {
  for (unsigned r = 1; r <= 5; ++r) {
    IdentityRepresentation rep = identity_representation(r);
    CHECK(check_identity_representation(rep));
    if (r == 1) CHECK(rep.n() == 2);
    IdentityRepresentation broken = rep;
    broken.offset += 1;
    CHECK_FALSE(check_identity_representation(broken));
  }
}

TEST_CASE("strictify replaces identity neurons") {
  Network f = mixed_net();
  Network s = strictify(f);
  CHECK(is_strict(s));
  IdentityRepresentation rep = identity_representation(2);
  auto cf = complexity(f), cs = complexity(s);
  CHECK(cs.W <= rep.n() * rep.n() * cf.W);
  CHECK(cs.N <= rep.n() * cf.N);
  for (const auto& x : grid2()) CHECK(evaluate(s, x) == evaluate(f, x));
}

TEST_CASE("power_unroll turns ϱ_4 into chains of ϱ_2") {
  Network n = abs_net();
  n.layers[0].act = {Activation::rho(4), Activation::rho(4)};
  Network u = power_unroll(n, 2, 2);
  CHECK(rho_degree(u) == 2);
  auto cn = complexity(n), cu = complexity(u);
  CHECK(cu.L == 1 + 2 * (cn.L - 1));
  CHECK(cu.N == 2 * cn.N);
  CHECK(cu.W <= cn.W + cn.N);
  for (long x = -4; x <= 4; ++x) CHECK(evaluate(u, {q(x, 3)}) == evaluate(n, {q(x, 3)}));
  CHECK_THROWS_AS(power_unroll(n, 3, 2), std::invalid_argument);
}

TEST_CASE("substituting a network activation") {
  Network sigma = squash_net(2);
  unsigned h = register_network_activation("test-squash2", sigma);
  Network g;
  g.layers.push_back({AffineMap(2, 1, {{0, 0, 2}, {1, 0, -1}}, {q(0), q(1, 2)}),
                      {Activation::custom(h), Activation::identity()}});
  g.layers.push_back({AffineMap(1, 2, {{0, 0, 1}, {0, 1, 3}}, {q(0)}), {Activation::identity()}});
  for (auto mode : {SubstituteMode::TwoLayer, SubstituteMode::General}) {
    Network s = substitute_activation(g, h, sigma, mode);
    CHECK_FALSE(has_custom(s));
    for (long x = -6; x <= 6; ++x) CHECK(evaluate(s, {q(x, 4)}) == evaluate(g, {q(x, 4)}));
  }
  Network rho_only = abs_net();
  CHECK_THROWS(substitute_activation(rho_only, h, abs_net(), SubstituteMode::General));
}

TEST_CASE("approximate strictification converges as m grows") {
  CustomActivation sp;
  sp.name = "test-softplus";
  sp.eval = [](const Float& x) { return Float(log1p(exp(x))); };
  sp.derivative_point = std::make_pair(Rational(0), q(1, 2));
  unsigned h = register_custom(sp);
  Network g;
  g.layers.push_back({AffineMap(2, 1, {{0, 0, 1}, {1, 0, -1}}, {q(0), q(1)}),
                      {Activation::custom(h), Activation::identity()}});
  g.layers.push_back({AffineMap(1, 2, {{0, 0, 1}, {0, 1, 1}}, {q(0)}), {Activation::identity()}});
  StrictifyApprox a = strictify_approx(g, h, 4), b = strictify_approx(g, h, 256);
  for (const auto* s : {&a, &b})
    for (std::size_t l = 0; l + 1 < s->net.depth(); ++l)
      for (const auto& act : s->net.layers[l].act) CHECK(act.is_custom());
  CHECK(b.sup_error < a.sup_error);
  CHECK(b.sup_error < 1.0 / 16);
}
