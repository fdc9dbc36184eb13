#include "nncalc/affine_map.hpp"
#include "nncalc/evaluate_float.hpp"
#include "nncalc/json_io.hpp"
#include "nncalc/network.hpp"
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

// x ↦ ϱ(x) − ϱ(−x) + 1, written out by hand.
Network abs_like() {
  Network n;
  n.layers.push_back({AffineMap(2, 1, {{0, 0, 1}, {1, 0, -1}}, {0, 0}), {Activation::rho(1), Activation::rho(1)}});
  n.layers.push_back({AffineMap(1, 2, {{0, 0, 1}, {0, 1, -1}}, {1}), {Activation::identity()}});
  return n;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/6") == q(1, 2));
  CHECK(parse_rational("-7") == q(-7));
  CHECK(to_string(q(3)) == "3/1");
  CHECK(to_string(q(-2, 4)) == "-1/2");
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK(rho(q(-3), 2) == 0);
  CHECK(rho(q(3, 2), 2) == q(9, 4));
  CHECK(binomial(5, 2) == 10);
  CHECK(from_double(0.375) == q(3, 8));
  CHECK(floor(q(-1, 2)) == -1);
  CHECK(ceil(q(-1, 2)) == 0);
}

TEST_CASE("affine map storage and algebra") {
  AffineMap A(2, 3, {{1, 2, 5}, {0, 0, 1}, {0, 1, 0}}, {q(1), q(-1)});
  CHECK(A.l0() == 2);  // stored zero dropped
  CHECK(A.apply({q(1), q(2), q(3)}) == RVec{q(2), q(14)});
  CHECK(A.l0_col_max() == 1);
  CHECK(A.l0_row_max() == 1);
  CHECK_THROWS_AS(AffineMap(1, 1, {{0, 0, 1}, {0, 0, 2}}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(AffineMap(1, 1, {{1, 0, 1}}, {0}), std::invalid_argument);
  AffineMap acc = AffineMap::accumulate(1, 1, {{0, 0, 1}, {0, 0, -1}}, {0});
  CHECK(acc.l0() == 0);

  AffineMap B(3, 1, {{0, 0, 2}, {2, 0, -1}}, {q(0), q(4), q(0)});
  AffineMap AB = compose(A, B);
  RVec x{q(3, 7)};
  CHECK(AB.apply(x) == A.apply(B.apply(x)));
  AffineMap sel = AffineMap::selection(3, {2, 0});
  CHECK(sel.apply({q(1), q(2), q(3)}) == RVec{q(3), q(1)});
  AffineMap bd = block_diag({&A, &B});
  CHECK(bd.rows() == 5);
  CHECK(bd.cols() == 4);
  AffineMap hs = hsum({&B, &B});
  CHECK(hs.apply({q(1), q(1)}) == RVec{q(4), q(8), q(-2)});
}

TEST_CASE("network validation and complexity") {
  Network n = abs_like();
  CHECK(validate(n).empty());
  auto c = complexity(n);
  CHECK(c.W == 4);
  CHECK(c.N == 2);
  CHECK(c.L == 2);
  CHECK(c.W0 == 5);  // weights plus nonzero biases
  CHECK(is_strict(n));
  CHECK(evaluate(n, {q(-3)}) == RVec{q(-2)});
  CHECK(evaluate(n, {q(5, 2)}) == RVec{q(7, 2)});

  Network bad = n;
  bad.layers[1].map = AffineMap(1, 3);
  CHECK_FALSE(validate(bad).empty());
  CHECK_THROWS_AS(require_valid(bad), std::invalid_argument);
  Network bad_act = n;
  bad_act.layers[1].act[0] = Activation::rho(1);
  CHECK_FALSE(validate(bad_act).empty());

  Network mixed = n;
  mixed.layers[0].act[1] = Activation::identity();
  CHECK_FALSE(is_strict(mixed));
}

TEST_CASE("compress drops dead neurons and keeps the realization") {
  Network n = abs_like();
  n.layers[0].map = AffineMap(2, 1, {{0, 0, 1}}, {q(0), q(3)});  // neuron 2 is constant ϱ(3) = 3
  Network c = compress(n);
  CHECK(complexity(c).N == 1);
  for (long x = -4; x <= 4; ++x) CHECK(evaluate(c, {q(x)}) == evaluate(n, {q(x)}));
  Network dead = n;
  dead.layers[0].map = AffineMap(2, 1, {}, {q(1), q(-1)});
  Network k = compress(dead);
  CHECK(complexity(k).W == 0);
  CHECK(evaluate(k, {q(9)}) == evaluate(dead, {q(9)}));
}

TEST_CASE("constant and affine networks") {
  Network c = constant_network({q(2), q(-1, 3)}, 3);
  CHECK(c.d_in() == 3);
  CHECK(evaluate(c, {q(1), q(2), q(3)}) == RVec{q(2), q(-1, 3)});
  CHECK(complexity(c).W == 0);
}

TEST_CASE("JSON round trip is exact") {
  SplitMix64 rng(99);
  RandomNetSpec spec;
  spec.d_in = 2;
  spec.d_out = 2;
  spec.r = 3;
  spec.identity_percent = 30;
  for (int i = 0; i < 50; ++i) {
    Network n = random_network(spec, rng);
    std::string text = dump_network(n);
    Network back = parse_network(text);
    CHECK(dump_network(back) == text);
    for (std::size_t l = 0; l < n.depth(); ++l) CHECK(back.layers[l].map == n.layers[l].map);
  }
  CHECK_THROWS_AS(parse_network("{\"format\":\"other\"}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_network("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_activation_tag("tanh"), std::invalid_argument);
}

TEST_CASE("float evaluation encloses the exact value") {
  Network n = abs_like();
  n.layers[0].act = {Activation::rho(3), Activation::rho(3)};
  for (double x : {-1.3, 0.1, 2.75}) {
    FloatEvaluation f = evaluate_float(n, std::vector<double>{x});
    Rational exact = evaluate(n, {from_double(x)})[0];
    double diff = std::fabs(static_cast<double>(f.value[0]) - exact.get_d());
    CHECK(diff <= f.error_bound[0] + 1e-15);
    CHECK(f.precision_bits >= 128);
  }
}

TEST_CASE("seeded generator is reproducible and unbiased in range") {
  SplitMix64 a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  SplitMix64 s = SplitMix64(5).split(3), t = SplitMix64(5).split(3), u = SplitMix64(5).split(4);
  CHECK(s.next() == t.next());
  CHECK(SplitMix64(5).split(3).next() != u.next());
  SplitMix64 r(1);
  int hist[3] = {0, 0, 0};
  for (int i = 0; i < 3000; ++i) ++hist[r.below(3)];
  for (int h : hist) CHECK(h > 850);
  RandomNetSpec spec;
  spec.max_W = 12;
  spec.min_L = spec.max_L = 4;
  SplitMix64 g(3);
  for (int i = 0; i < 50; ++i) {
    Network n = random_network(spec, g);
    CHECK(validate(n).empty());
    CHECK(complexity(n).W <= 12);
    CHECK(n.depth() == 4);
  }
}
