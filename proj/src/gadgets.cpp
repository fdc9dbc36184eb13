#include "nncalc/gadgets.hpp"

#include "nncalc/calculus.hpp"
#include "nncalc/evaluate_float.hpp"
#include "nncalc/extract.hpp"
#include "nncalc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nncalc {

namespace {

// Depth-2 net Σ_k out[k] ϱ_r(w x − k), k = 0..K−1.
Network shifted_powers(const Rational& w, const RVec& out, unsigned r) {
  std::size_t K = out.size();
  std::vector<Entry> te, ue;
  RVec tb;
  for (std::size_t k = 0; k < K; ++k) {
    te.push_back({k, 0, w});
    tb.push_back(Rational(-static_cast<long>(k)));
    ue.push_back({0, k, out[k]});
  }
  Network net;
  net.layers.push_back({AffineMap(K, 1, std::move(te), std::move(tb)), std::vector<Activation>(K, Activation::rho(r))});
  net.layers.push_back({AffineMap(1, K, std::move(ue), RVec{0}), {Activation::identity()}});
  return net;
}

Rational alt_binomial(unsigned n, unsigned k) { return Rational(binomial(n, k)) * (k % 2 == 0 ? 1 : -1); }

// x ↦ (x_i − shift) · factor + offset as a 1×d map.
AffineMap coordinate_map(std::size_t d, std::size_t i, const Rational& factor, const Rational& offset) {
  return AffineMap(1, d, {{0, i, factor}}, RVec{offset});
}

Network product_pair(unsigned r) {
  if (r < 2) throw std::invalid_argument("exact multiplication needs r >= 2 (rho_1 cannot square)");
  Network sq = represent_polynomial({0, 0, 1}, r);
  // xy = ((x+y)² − (x−y)²)/4
  AffineMap T0(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, -1}}, RVec(2));
  AffineMap Q(1, 2, {{0, 0, Rational(1, 4)}, {0, 1, Rational(-1, 4)}}, RVec{0});
  return pre_post_affine(block_parallel({sq, sq}), T0, Q);
}

}  // namespace

Network bspline_net(unsigned n) {
  if (n == 0) throw std::invalid_argument("bspline_net needs n >= 1 (degree 0 is discontinuous)");
  RVec out;
  Rational inv = Rational(1) / Rational(factorial(n));
  for (unsigned k = 0; k <= n + 1; ++k) out.push_back(alt_binomial(n + 1, k) * inv);
  return shifted_powers(1, out, n);
}

Network squash_net(unsigned r) {
  if (r == 0) throw std::invalid_argument("squash_net needs r >= 1");
  RVec out;
  Rational inv = Rational(1) / Rational(factorial(r));
  for (unsigned k = 0; k <= r; ++k) out.push_back(alt_binomial(r, k) * inv);
  return shifted_powers(Rational(r), out, r);
}

Network mult_net(std::size_t d, unsigned r) {
  if (d < 2) throw std::invalid_argument("mult_net needs d >= 2");
  Network m2 = product_pair(r);
  std::size_t j = 0;
  while ((std::size_t(1) << j) < d) ++j;
  std::size_t width = std::size_t(1) << j;
  Network tree;
  for (std::size_t level = width; level >= 2; level /= 2) {
    Network stage = block_parallel(std::vector<Network>(level / 2, m2));
    tree = tree.layers.empty() ? stage : compose_stacked(tree, stage);
  }
  if (width == d) return tree;
  // x ↦ (x, 1, ..., 1)
  std::vector<Entry> e;
  RVec b(width);
  for (std::size_t i = 0; i < d; ++i) e.push_back({i, i, 1});
  for (std::size_t i = d; i < width; ++i) b[i] = 1;
  return pre_post_affine(tree, AffineMap(width, d, std::move(e), std::move(b)), AffineMap::identity(1));
}

Network scalar_vector_mult_net(std::size_t k, unsigned r) {
  if (k < 1) throw std::invalid_argument("scalar_vector_mult_net needs k >= 1");
  Network m2 = product_pair(r);
  if (k == 1) return m2;
  std::vector<Entry> e;
  for (std::size_t i = 0; i < k; ++i) {
    e.push_back({2 * i, 0, 1});
    e.push_back({2 * i + 1, i + 1, 1});
  }
  AffineMap P(2 * k, 1 + k, std::move(e), RVec(2 * k));
  return pre_post_affine(block_parallel(std::vector<Network>(k, m2)), P, AffineMap::identity(k));
}

Network tensor_bspline_net(std::size_t d, unsigned t) {
  if (d < 1) throw std::invalid_argument("tensor_bspline_net needs d >= 1");
  if (t < std::min<std::size_t>(d, 2))
    throw std::invalid_argument("tensor_bspline_net needs t >= min(d, 2)");
  Network beta = bspline_net(t);
  if (d == 1) return beta;
  std::vector<Network> factors;
  for (std::size_t i = 0; i < d; ++i)
    factors.push_back(pre_post_affine(beta, AffineMap::selection(d, {i}), AffineMap::identity(1)));
  return compose_stacked(cartesian(factors), mult_net(d, t));
}

bool satisfies_squashing(const PiecewisePoly& f) {
  const auto& br = f.breakpoints();
  const auto& ps = f.pieces();
  Real zero(0), one(1);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    bool left_of_zero = k == 0 || compare(br[k - 1], zero) < 0;
    bool right_of_one = k == br.size() || compare(br[k], one) > 0;
    if (left_of_zero && !ps[k].is_zero()) return false;
    if (right_of_one && !(ps[k] == Poly::constant(1))) return false;
  }
  if (f(0) != 0 || f(1) != 1) return false;
  PiecewisePoly centered = f - PiecewisePoly(Poly::constant(Rational(1, 2)));
  return lp_norm(centered, INFINITY, 0, 1).hi <= Rational(1, 2);
}

bool check_squashing(const Network& sigma, std::vector<std::string>* warnings) {
  require_valid(sigma);
  if (sigma.d_in() != 1 || sigma.d_out() != 1) return false;
  if (!has_custom(sigma)) return satisfies_squashing(extract_pieces(sigma));
  if (warnings) warnings->push_back("squashing property of custom sigma verified by sampling only");
  for (int i = 0; i <= 10000; ++i) {
    double x = -1.0 + 3.0 * i / 10000.0;
    double v = static_cast<double>(evaluate_float(sigma, std::vector<double>{x}).value[0]);
    double want_lo = x >= 1 ? 1.0 : 0.0, want_hi = x <= 0 ? 0.0 : 1.0;
    if (v < want_lo - 1e-12 || v > want_hi + 1e-12) return false;
  }
  return true;
}

IndicatorNet indicator_net(std::size_t d, const Rect& rect, const Rational& eps, const Network& sigma,
                           IndicatorPath path) {
  if (d < 1 || rect.size() != d) throw std::invalid_argument("rectangle must have d sides");
  if (!(eps > 0 && eps < Rational(1, 2))) throw std::invalid_argument("eps must lie in (0, 1/2)");
  for (const auto& [a, b] : rect)
    if (!(a < b)) throw std::invalid_argument("rectangle sides need a < b");
  IndicatorNet out;
  if (!check_squashing(sigma, &out.warnings)) throw std::invalid_argument("sigma does not satisfy the squashing property");

  // t_i(x) = σ(u/ε) − σ(1 + (u − 1)/ε), u = (x_i − a_i)/(b_i − a_i).
  std::vector<Network> terms;
  for (std::size_t i = 0; i < d; ++i) {
    const auto& [a, b] = rect[i];
    Rational f = 1 / ((b - a) * eps);
    terms.push_back(pre_post_affine(sigma, coordinate_map(d, i, f, -a * f), AffineMap::identity(1)));
    terms.push_back(pre_post_affine(sigma, coordinate_map(d, i, f, 1 - a * f - 1 / eps),
                                    AffineMap(1, 1, {{0, 0, -1}}, RVec{0})));
  }
  if (d == 1 && path == IndicatorPath::Auto) {
    out.net = sum(terms);
    out.shortcut = true;
    return out;
  }
  // h = σ(Σ_i t_i + 1 − d)
  Network outer = pre_post_affine(sigma, AffineMap(1, 1, {{0, 0, 1}}, RVec{Rational(1) - Rational(d)}),
                                  AffineMap::identity(1));
  out.net = compose_fused(sum(terms), outer);
  return out;
}

LocalizeNet localize_net(const Network& g, const Rational& R, const Rational& delta, unsigned r) {
  require_valid(g);
  if (r < 2) throw std::invalid_argument("localize_net needs r >= 2");
  if (R < 1) throw std::invalid_argument("localize_net needs R >= 1");
  if (!(delta > 0)) throw std::invalid_argument("localize_net needs delta > 0");
  ComplexityReport cg = complexity(g);
  if (cg.W == 0 || cg.N == 0) throw std::invalid_argument("result as stated cannot hold for W=0 or N=0");
  std::size_t d = g.d_in(), k = g.d_out();

  // P(x)_i = x_i/(2(R+δ)) + 1/2 maps [−R−δ, R+δ] onto [0, 1] and [−R, R]
  // onto [ε, 1−ε] with ε = δ/(2(R+δ)).
  Rational span = 2 * (R + delta);
  Rational eps = delta / span;
  Rect unit(d, {Rational(0), Rational(1)});
  Network theta0 = indicator_net(d, unit, eps, squash_net(r)).net;
  std::vector<Entry> pe;
  for (std::size_t i = 0; i < d; ++i) pe.push_back({i, i, 1 / span});
  AffineMap P(d, d, std::move(pe), RVec(d, Rational(1, 2)));
  Network theta = pre_post_affine(theta0, P, AffineMap::identity(1));

  LocalizeNet out;
  out.net = compose_fused(cartesian({theta, compress(g)}), scalar_vector_mult_net(k, r));

  ComplexityReport ct = complexity(theta);
  std::size_t w = ct.W, ell = ct.L, m = ct.N;
  std::size_t mn = std::min(d, k);
  std::size_t mult = 12 * k * (r + 1);
  std::size_t c1 = w + mn * (ell >= 2 ? ell - 2 : 0);
  std::size_t c2 = m + mn * (ell >= 2 ? ell - 2 : 0);
  std::size_t c4 = (1 + mn) * (1 + mult) + c1 + mult * c2;
  std::size_t c6 = (1 + mn) + m + mn * (ell - 1) + 4 * k * (r + 1);
  out.constant = std::max(c4, c6);
  out.depth_bound = std::max<std::size_t>(g.depth() + 1, d == 1 ? 3 : 4);
  return out;
}

}  // namespace nncalc
