#include "nncalc/approx.hpp"
#include "nncalc/gadgets.hpp"
#include "nncalc/norms.hpp"
#include "nncalc/random_net.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace nncalc;

namespace {

Rational q(long p, long d = 1) {
  Rational v(p, d);
  v.canonicalize();
  return v;
}

// Oscillation/2 of a piecewise-affine f on [a, b], from its values at the
// endpoints and the breakpoints inside.
double half_oscillation(const PiecewisePoly& f, const Rational& a, const Rational& b) {
  std::vector<double> v;
  // Left limit at b: evaluate just inside.
  auto left = [&](const Rational& x) {
    const Poly& p = f.pieces()[f.piece_index(x) == 0 ? 0 : f.piece_index(x) - (f.piece_index(x) > 0 &&
                                                          f.breakpoints()[f.piece_index(x) - 1] == Real(x))];
    return p(x).get_d();
  };
  v.push_back(f(a).get_d());
  v.push_back(left(b));
  for (const auto& br : f.breakpoints()) {
    const Rational& x = br.rational();
    if (x > a && x < b) {
      v.push_back(f(x).get_d());
      v.push_back(left(x));
    }
  }
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / 2;
}

// Best L∞ piecewise-constant error with ≤ n pieces and knots from `grid`,
// by exhaustive search.
double brute_force_sup(const PiecewisePoly& f, const std::vector<Rational>& grid, std::size_t n) {
  std::size_t K = grid.size();
  double best = INFINITY;
  std::size_t inner = K - 2;
  for (std::uint32_t mask = 0; mask < (1u << inner); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) + 1 > n) continue;
    double worst = 0;
    std::size_t prev = 0;
    for (std::size_t k = 1; k < K; ++k) {
      if (k < K - 1 && !(mask >> (k - 1) & 1)) continue;
      worst = std::max(worst, half_oscillation(f, grid[prev], grid[k]));
      prev = k;
    }
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace

TEST_CASE("knot candidates include target breakpoints") {
  PiecewisePoly f = linear_interpolant({q(0), q(1, 3), q(1)}, {q(0), q(1), q(0)}).restricted(0, 1);
  auto k = knot_candidates(f, 3);
  CHECK(k.size() == 10);
  CHECK(std::find(k.begin(), k.end(), q(1, 3)) != k.end());
  CHECK(k.front() == 0);
  CHECK(k.back() == 1);
  CHECK(std::is_sorted(k.begin(), k.end()));
}

TEST_CASE("best constants for the hat function") {
  PiecewisePoly hat = sawtooth_pw(1);
  FreeKnotResult inf = best_free_knot(hat, 1, 0, INFINITY, 6);
  CHECK(inf.error == doctest::Approx(0.5));
  FreeKnotResult l2 = best_free_knot(hat, 1, 0, 2, 6);
  CHECK(l2.error == doctest::Approx(std::sqrt(1.0 / 12)).epsilon(1e-9));
  FreeKnotResult l1 = best_free_knot(hat, 1, 0, 1, 6);
  CHECK(l1.error >= 0.25 - 1e-12);
  CHECK(l1.error == doctest::Approx(0.25).epsilon(1e-3));
  FreeKnotResult two = best_free_knot(hat, 2, 1, 1, 4);
  CHECK(two.error == 0);
  CHECK(two.knots == std::vector<Rational>{q(0), q(1, 2), q(1)});
}

TEST_CASE("exact targets are reproduced") {
  SplitMix64 rng(8);
  for (std::size_t n : {1u, 3u, 7u}) {
    PiecewisePoly f = random_spline(rng, n, 1);
    for (double p : {1.0, 2.0, double(INFINITY)}) {
      FreeKnotResult r = best_free_knot(f, n, 1, p, 5);
      CHECK(r.error == 0);
      CHECK(r.error_pow_hi == 0);
    }
  }
  PiecewisePoly cubic = PiecewisePoly(Poly({q(1), q(-2), q(0), q(3)})).restricted(0, 1);
  CHECK(best_free_knot(cubic, 1, 3, 2, 4).error == 0);
}

TEST_CASE("DP matches exhaustive search for piecewise constants in sup norm") {
  SplitMix64 rng(21);
  for (int t = 0; t < 6; ++t) {
    PiecewisePoly f = random_spline(rng, 1 + t % 4, 1);
    auto grid = knot_candidates(f, 3);
    if (grid.size() > 14) continue;
    for (std::size_t n = 1; n <= 4; ++n) {
      FreeKnotResult r = best_free_knot(f, n, 0, INFINITY, 3);
      CHECK(r.objective == doctest::Approx(brute_force_sup(f, grid, n)).epsilon(1e-12));
      CHECK(r.error == doctest::Approx(r.objective).epsilon(1e-12));
    }
  }
}

TEST_CASE("segment costs are identical in parallel and serial") {
  PiecewisePoly f = sawtooth_pw(3);
  auto k = knot_candidates(f, 5);
  for (double p : {1.0, 2.0, double(INFINITY)}) CHECK(segment_costs(f, k, 1, p, true) == segment_costs(f, k, 1, p, false));
}

TEST_CASE("objective is monotone in budget and resolution") {
  PiecewisePoly f = sawtooth_pw(4);
  auto many = best_free_knot(f, std::vector<std::size_t>{1, 2, 3, 4, 6, 8}, 1, 1, 6);
  for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i].objective <= many[i - 1].objective + 1e-15);
  double coarse = best_free_knot(f, 3, 0, 2, 4).objective, fine = best_free_knot(f, 3, 0, 2, 6).objective;
  CHECK(fine <= coarse + 1e-15);
  CHECK_THROWS_AS(best_free_knot(f, 3, 1, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(best_free_knot(f, 3, 1, 1, 13), std::invalid_argument);
}

TEST_CASE("finite differences and moduli") {
  PiecewisePoly sq(Poly::monomial(2));
  CHECK(finite_difference(sq, 2, q(1, 8)) == PiecewisePoly(Poly::constant(q(2, 64))));
  CHECK(difference_norm(sq, 2, q(1, 8), 1) == doctest::Approx(2.0 / 64 * 0.75));
  CHECK(difference_norm(sq, 2, q(1, 2), INFINITY) == doctest::Approx(2.0 / 4));
  CHECK(difference_norm(sq, 2, q(3, 4), 1) == 0);
  PiecewisePoly lin(Poly::linear(3, 1));
  CHECK(modulus(lin, 2, 2, q(1, 2)).value == 0);
  PiecewisePoly hat = sawtooth_pw(1);
  ModulusValue m = modulus(hat, 2, INFINITY, q(1, 2));
  CHECK(m.value == 2);
  CHECK(m.h == q(1, 2));
  CHECK(modulus(hat, 2, 1, q(1, 4)).value <= modulus(hat, 2, 1, q(1, 2)).value);
  ModulusTable t = modulus_table(sawtooth_pw(3), 1, 2, {q(1, 2), q(1, 32), q(1, 8)});
  CHECK(t.samples.front().first == q(1, 32));
  for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].second >= t.samples[i - 1].second);
}

TEST_CASE("Besov lower bounds") {
  CHECK(besov_lower(PiecewisePoly(Poly::linear(2, 1)), 1, 2, INFINITY) == 0);
  double a = besov_lower(sawtooth_pw(3), 1, 2, INFINITY), b = besov_lower(sawtooth_pw(4), 1, 2, INFINITY);
  CHECK(a > 0);
  CHECK(b > a);
  double q2 = besov_lower(sawtooth_pw(3), 1, 2, 2);
  CHECK(q2 > 0);
  CHECK(std::isfinite(q2));
}

TEST_CASE("approximation curves and truncated norms") {
  ApproxErrorCurve c;
  c.family = "free-knot-ppoly";
  c.budgets = {0, 1, 3};
  c.errors = {1, 0.5, 0.25};
  CHECK(truncated_approx_norm(c, 1, INFINITY).value == doctest::Approx(1));
  TruncatedNorm one = truncated_approx_norm(c, 1, 1);
  CHECK(one.value == doctest::Approx(1.75));
  CHECK(one.truncation == 4);
  CHECK(one.terms == 3);
  ApproxErrorCurve bad = c;
  bad.errors = {0.5, 1, 0.25};
  CHECK_THROWS_AS(truncated_approx_norm(bad, 1, 1), std::invalid_argument);

  PiecewisePoly hat = sawtooth_pw(2);
  ApproxErrorCurve fk = free_knot_curve(hat, {0, 1, 2, 4}, 1, 2, 4);
  CHECK(fk.errors[0] == doctest::Approx(std::sqrt(1.0 / 3)));
  CHECK(fk.errors.back() == 0);
  for (std::size_t i = 1; i < fk.errors.size(); ++i) CHECK(fk.errors[i] <= fk.errors[i - 1]);
}

TEST_CASE("sawtooth inapproximability check") {
  CHECK(inapprox_applicable(4, 2, 1));
  CHECK_FALSE(inapprox_applicable(4, 3, 1));
  CHECK_THROWS_AS(sawtooth_inapprox_check(4, 3, 1, 1, 6), std::invalid_argument);
  CHECK_THROWS_AS(sawtooth_inapprox_check(4, 0, 1, 1, 6), std::invalid_argument);
  InapproxReport r = sawtooth_inapprox_check(5, 4, 1, 1, 7);
  CHECK(r.pass);
  CHECK(r.bound == doctest::Approx(1.0 / 32));
  CHECK(r.margin == doctest::Approx(r.dp_error - r.bound));
  std::string row = inapprox_csv_row(r);
  std::string header = inapprox_csv_header();
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
  CHECK(row.rfind("5,4,1,1,7,", 0) == 0);
}

TEST_CASE("Bernstein probe") {
  BernsteinReport r = bernstein_probe({4, 32, 64, 128, 256}, 1, 2, 1, 3);
  CHECK(r.sigma == doctest::Approx(1 / 1.5));
  CHECK(r.entries.size() == 10);
  CHECK(r.slope == doctest::Approx(1).epsilon(0.1));
  CHECK(r.pass);
  BernsteinReport flat = bernstein_probe({1}, 1, 2, 1, 3);
  CHECK(flat.entries.size() == 1);
  CHECK(flat.pass);
  CHECK_THROWS_AS(bernstein_probe({4}, 2, 2, 1, 3), std::invalid_argument);
}
