#include "nncalc/verify.hpp"

#include "nncalc/approx.hpp"
#include "nncalc/calculus.hpp"
#include "nncalc/crossing.hpp"
#include "nncalc/extract.hpp"
#include "nncalc/gadgets.hpp"
#include "nncalc/norms.hpp"
#include "nncalc/random_net.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace nncalc {

// ---- Recorder ----------------------------------------------------------------

void Recorder::check(const std::string& name, bool ok, const std::function<Json()>& witness) {
  Entry& e = entries_[name];
  ++e.checks;
  if (ok) return;
  if (e.failures++ == 0) e.witness = witness ? witness() : Json::object();
}

void Recorder::merge(const Recorder& later) {
  for (const auto& [name, e] : later.entries_) {
    Entry& mine = entries_[name];
    if (mine.failures == 0 && e.failures > 0) mine.witness = e.witness;
    mine.checks += e.checks;
    mine.failures += e.failures;
  }
}

std::size_t Recorder::failures() const {
  std::size_t n = 0;
  for (const auto& [_, e] : entries_) n += e.failures > 0;
  return n;
}

std::size_t Recorder::checks() const {
  std::size_t n = 0;
  for (const auto& [_, e] : entries_) n += e.checks;
  return n;
}

Json Recorder::to_json() const {
  Json out = Json::object();
  for (const auto& [name, e] : entries_) {
    Json j{{"checks", e.checks}, {"status", e.failures ? "fail" : "pass"}};
    if (e.failures) {
      j["failures"] = e.failures;
      j["witness"] = e.witness;
    }
    out[name] = std::move(j);
  }
  return out;
}

namespace {

// ---- helpers -------------------------------------------------------------------

Json vec_json(const RVec& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

Json complexity_json(const Network& n) {
  auto c = complexity(n);
  return {{"W", c.W}, {"N", c.N}, {"L", c.L}};
}

template <class Body>
void fan_out(Recorder& rec, const std::string& prefix, std::size_t trials, bool parallel, Body&& body) {
  std::vector<Recorder> local(trials);
  auto run = [&](std::size_t t) {
    try {
      body(local[t], t);
    } catch (const std::exception& e) {
      std::string what = e.what();
      local[t].check(prefix + "/no_exception", false, [&] { return Json{{"trial", t}, {"error", what}}; });
    }
  };
  const long n = static_cast<long>(trials);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < n; ++t) run(static_cast<std::size_t>(t));
  } else {
    for (long t = 0; t < n; ++t) run(static_cast<std::size_t>(t));
  }
  for (const auto& l : local) rec.merge(l);
}

using Target = std::function<RVec(const RVec&)>;

void check_realization(Recorder& rec, const std::string& name, const Network& out, const Target& target,
                       const std::vector<RVec>& pts, const std::vector<const Network*>& inputs) {
  for (const auto& x : pts) {
    RVec got = evaluate(out, x), want = target(x);
    if (got != want) {
      rec.check(name, false, [&] {
        Json in = Json::array();
        for (const auto* n : inputs) in.push_back(to_json(*n));
        return Json{{"network", to_json(out)}, {"inputs", in}, {"input", vec_json(x)}, {"got", vec_json(got)},
                    {"want", vec_json(want)}};
      });
      return;
    }
  }
  rec.check(name, true);
}

void check_budget(Recorder& rec, const std::string& name, bool ok, const Network& out,
                  const std::vector<const Network*>& inputs) {
  rec.check(name, ok, [&] {
    Json in = Json::array();
    for (const auto* n : inputs) in.push_back(Json{{"network", to_json(*n)}, {"complexity", complexity_json(*n)}});
    return Json{{"network", to_json(out)}, {"complexity", complexity_json(out)}, {"inputs", in}};
  });
}

// Validity plus L ≤ 1 + N and W ≤ (d_in + N)(N + d_out).
void check_invariants(Recorder& rec, const std::string& prefix, const Network& n) {
  bool valid = validate(n).empty();
  rec.check(prefix + "/valid", valid, [&] { return Json{{"network", to_json(n)}}; });
  if (!valid) return;
  auto c = complexity(n);
  bool ok = c.L <= 1 + c.N && c.W <= (n.d_in() + c.N) * (c.N + n.d_out());
  check_budget(rec, prefix + "/complexity_invariants", ok, n, {});
}

bool same_network(const Network& a, const Network& b) {
  if (a.depth() != b.depth()) return false;
  for (std::size_t l = 0; l < a.depth(); ++l)
    if (!(a.layers[l].map == b.layers[l].map) || a.layers[l].act != b.layers[l].act) return false;
  return true;
}

void check_json_roundtrip(Recorder& rec, const std::string& name, const Network& n) {
  std::string text = dump_network(n);
  Network back = parse_network(text);
  bool ok = same_network(n, back) && dump_network(back) == text;
  rec.check(name, ok, [&] { return Json{{"network", to_json(n)}}; });
}

std::vector<RVec> random_points(SplitMix64& rng, std::size_t d, std::size_t count) {
  std::vector<RVec> pts;
  for (std::size_t i = 0; i < count; ++i) pts.push_back(random_point(rng, d));
  return pts;
}

RVec concat(const RVec& a, const RVec& b) {
  RVec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

RVec add(const RVec& a, const RVec& b) {
  RVec out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

AffineMap random_map(SplitMix64& rng, std::size_t rows, std::size_t cols, bool allow_zero) {
  std::vector<Entry> e;
  RVec b;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j)
      if (rng.below(2)) e.push_back({i, j, random_rational(rng, 3, 4, true)});
    b.push_back(random_rational(rng, 3, 4));
  }
  if (e.empty() && !allow_zero) e.push_back({0, 0, 1});
  return AffineMap(rows, cols, std::move(e), std::move(b));
}

// Marks some hidden rows dead and occasionally wipes a middle map.
Network with_dead_neurons(Network n, SplitMix64& rng) {
  for (std::size_t l = 0; l + 1 < n.depth(); ++l) {
    auto& m = n.layers[l].map;
    std::vector<Entry> keep;
    std::vector<bool> dead(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) dead[i] = rng.below(4) == 0;
    for (auto& e : m.entries())
      if (!dead[e.row]) keep.push_back(e);
    m = AffineMap(m.rows(), m.cols(), std::move(keep), m.bias());
  }
  if (n.depth() >= 3 && rng.below(5) == 0) {
    auto& m = n.layers[1].map;
    m = AffineMap(m.rows(), m.cols(), {}, m.bias());
  }
  return n;
}

// ---- calculus -------------------------------------------------------------------

void calculus_trial(Recorder& rec, std::uint64_t seed, std::size_t t, std::size_t npts) {
  SplitMix64 rng = SplitMix64(seed).split(t);
  unsigned r = 1 + static_cast<unsigned>(t % 3);
  std::size_t d = static_cast<std::size_t>(rng.between(1, 3)), k = static_cast<std::size_t>(rng.between(1, 3));
  RandomNetSpec spec;
  spec.d_in = d;
  spec.d_out = k;
  spec.r = r;
  spec.identity_percent = 25;
  Network A = random_network(spec, rng), B = random_network(spec, rng), B3 = random_network(spec, rng);
  RandomNetSpec other = spec;
  other.d_out = static_cast<std::size_t>(rng.between(1, 3));
  Network B2 = random_network(other, rng);
  RandomNetSpec next = spec;
  next.d_in = k;
  next.d_out = static_cast<std::size_t>(rng.between(1, 3));
  Network C = random_network(next, rng);
  auto pts = random_points(rng, d, npts);
  auto cA = complexity(A), cB = complexity(B), cB2 = complexity(B2), cB3 = complexity(B3), cC = complexity(C);
  auto R = [](const Network& n) { return [&n](const RVec& x) { return evaluate(n, x); }; };

  for (const Network* n : {&A, &B, &B2, &B3, &C}) check_invariants(rec, "calculus/random", *n);

  {  // deepen
    std::size_t L0 = static_cast<std::size_t>(rng.between(0, 3));
    Network D = deepen(A, L0);
    std::size_t c = std::min(d, k);
    auto cD = complexity(D);
    check_realization(rec, "calculus/deepen/realization", D, R(A), pts, {&A});
    check_budget(rec, "calculus/deepen/budget",
                 cD.L == cA.L + L0 && cD.W == cA.W + c * L0 && cD.N == cA.N + c * L0, D, {&A});
    check_invariants(rec, "calculus/deepen", D);
  }
  {  // scale
    Rational a = rng.below(6) == 0 ? Rational(0) : random_rational(rng, 3, 4, true);
    Network S = scale(A, a);
    auto cS = complexity(S);
    check_realization(
        rec, "calculus/scale/realization", S,
        [&](const RVec& x) {
          RVec v = evaluate(A, x);
          for (auto& y : v) y *= a;
          return v;
        },
        pts, {&A});
    bool ok = cS.W <= cA.W && (a == 0 || cS.W == cA.W) && cS.L == cA.L && cS.N == cA.N;
    check_budget(rec, "calculus/scale/budget", ok, S, {&A});
  }
  {  // cartesian
    std::vector<Network> nets{A, B2, B};
    Network P = cartesian(nets);
    std::size_t K = k + B2.d_out() + k;
    std::size_t Lmax = std::max({cA.L, cB2.L, cB.L}), Lmin = std::min({cA.L, cB2.L, cB.L});
    std::size_t delta = std::min(d, K - 1) * (Lmax - Lmin);
    auto cP = complexity(P);
    check_realization(
        rec, "calculus/cartesian/realization", P,
        [&](const RVec& x) { return concat(concat(evaluate(A, x), evaluate(B2, x)), evaluate(B, x)); }, pts,
        {&A, &B2, &B});
    bool ok = cP.L == Lmax && cP.W <= delta + cA.W + cB2.W + cB.W && cP.N <= delta + cA.N + cB2.N + cB.N;
    check_budget(rec, "calculus/cartesian/budget", ok, P, {&A, &B2, &B});
    check_invariants(rec, "calculus/cartesian", P);
  }
  {  // sum and associativity
    Network S = sum({A, B, B3});
    std::size_t Lmax = std::max({cA.L, cB.L, cB3.L}), Lmin = std::min({cA.L, cB.L, cB3.L});
    std::size_t delta = std::min(d, k) * (Lmax - Lmin);
    auto cS = complexity(S);
    check_realization(
        rec, "calculus/sum/realization", S,
        [&](const RVec& x) { return add(add(evaluate(A, x), evaluate(B, x)), evaluate(B3, x)); }, pts, {&A, &B, &B3});
    bool ok = cS.L == Lmax && cS.W <= delta + cA.W + cB.W + cB3.W && cS.N <= delta + cA.N + cB.N + cB3.N;
    check_budget(rec, "calculus/sum/budget", ok, S, {&A, &B, &B3});
    Network left = sum({sum({A, B}), B3}), right = sum({A, sum({B, B3})});
    check_realization(rec, "calculus/sum/associativity", left, R(right), pts, {&A, &B, &B3});
    Network zero = sum({A, scale(A, -1)});
    check_realization(
        rec, "calculus/sum/cancellation", zero, [&](const RVec&) { return RVec(k, Rational(0)); }, pts, {&A});
    check_invariants(rec, "calculus/sum", S);
  }
  {  // pre_post_affine
    std::size_t dp = static_cast<std::size_t>(rng.between(1, 3)), kq = static_cast<std::size_t>(rng.between(1, 3));
    AffineMap P = random_map(rng, d, dp, false);
    AffineMap Q = random_map(rng, kq, k, rng.below(8) == 0);
    Network M = pre_post_affine(A, P, Q);
    auto cM = complexity(M);
    auto ppts = random_points(rng, dp, npts);
    check_realization(
        rec, "calculus/pre_post_affine/realization", M, [&](const RVec& x) { return Q.apply(evaluate(A, P.apply(x))); },
        ppts, {&A});
    bool ok = Q.l0() == 0 ? (cM.W == 0 && cM.L == 1)
                          : (cM.W <= Q.l0_col_max() * cA.W * P.l0_row_max() && cM.L == cA.L && cM.N == cA.N);
    check_budget(rec, "calculus/pre_post_affine/budget", ok, M, {&A});
  }
  {  // compositions
    Network S = compose_stacked(A, C), F = compose_fused(A, C);
    auto cS = complexity(S), cF = complexity(F);
    Target target = [&](const RVec& x) { return evaluate(C, evaluate(A, x)); };
    check_realization(rec, "calculus/compose_stacked/realization", S, target, pts, {&A, &C});
    check_realization(rec, "calculus/compose_fused/realization", F, target, pts, {&A, &C});
    check_budget(rec, "calculus/compose_stacked/budget",
                 cS.W == cA.W + cC.W && cS.L == cA.L + cC.L && cS.N == cA.N + cC.N + k, S, {&A, &C});
    check_budget(rec, "calculus/compose_fused/budget",
                 cF.L == cA.L + cC.L - 1 && cF.N == cA.N + cC.N && cF.W <= cA.W + std::max(cA.N, d) * cC.W, F,
                 {&A, &C});
    check_invariants(rec, "calculus/compose_fused", F);
  }
  {  // strictify
    IdentityRepresentation rep = identity_representation(r);
    std::size_t n = rep.n();
    Network S = strictify(A, rep);
    auto cS = complexity(S);
    check_realization(rec, "calculus/strictify/realization", S, R(A), pts, {&A});
    bool no_identity = true;
    for (std::size_t l = 0; l + 1 < S.depth(); ++l)
      for (const auto& a : S.layers[l].act) no_identity = no_identity && a.is_rho();
    rec.check("calculus/strictify/strict", no_identity && is_strict(S), [&] { return Json{{"network", to_json(S)}}; });
    check_budget(rec, "calculus/strictify/budget", cS.W <= n * n * cA.W && cS.N <= n * cA.N && cS.L == cA.L, S, {&A});
  }
  {  // power_unroll with s = 2 over ϱ_r, r ∈ {1, 2}
    unsigned base = 1 + static_cast<unsigned>(t % 2);
    RandomNetSpec ps = spec;
    ps.r = base * base;
    ps.max_L = 4;
    Network U = random_network(ps, rng);
    auto cU = complexity(U);
    Network V = power_unroll(U, base, 2);
    auto cV = complexity(V);
    check_realization(rec, "calculus/power_unroll/realization", V, R(U), pts, {&U});
    check_budget(rec, "calculus/power_unroll/budget",
                 cV.W <= cU.W + cU.N && cV.L == 1 + 2 * (cU.L - 1) && cV.N == 2 * cU.N, V, {&U});
  }
  {  // compress
    Network Dd = with_dead_neurons(A, rng);
    auto cD = complexity(Dd);
    Network Cp = compress(Dd);
    auto cC2 = complexity(Cp);
    check_realization(rec, "calculus/compress/realization", Cp, R(Dd), pts, {&Dd});
    bool ok = cC2.L <= cD.L && cC2.N <= cD.N && (cD.W == 0 || cC2.N <= cD.W) && cC2.W0 <= k + 2 * cD.W;
    check_budget(rec, "calculus/compress/budget", ok, Cp, {&Dd});
    check_budget(rec, "calculus/compress/idempotent", complexity(compress(Cp)).W == cC2.W, Cp, {&Dd});
  }
  {  // represent_polynomial
    RVec coeffs;
    std::size_t deg = static_cast<std::size_t>(rng.between(0, r));
    for (std::size_t i = 0; i <= deg; ++i) coeffs.push_back(random_rational(rng, 3, 4));
    Network Pn = represent_polynomial(coeffs, r);
    auto cP = complexity(Pn);
    Poly q(coeffs);
    SplitMix64 prng = rng.split(11);
    check_realization(
        rec, "calculus/represent_polynomial/realization", Pn, [&](const RVec& x) { return RVec{q(x[0])}; },
        random_points(prng, 1, npts), {});
    check_budget(rec, "calculus/represent_polynomial/budget", cP.L == 2 && cP.N <= 2 * r + 2 && is_strict(Pn), Pn, {});
  }
  {  // substitute_activation with σ = σ_q realized by squash_net(q)
    unsigned q = 1 + static_cast<unsigned>(t % 3);
    Network sigma_net = squash_net(q);
    unsigned h = register_network_activation("squash:" + std::to_string(q), sigma_net);
    Network Sg = A;
    for (std::size_t l = 0; l + 1 < Sg.depth(); ++l)
      for (auto& a : Sg.layers[l].act)
        if (a.is_rho()) a = Activation::custom(h);
    auto cS = complexity(Sg);
    auto cs = complexity(sigma_net);
    std::size_t w = cs.W, ell = cs.L, m = cs.N;
    Network two = substitute_activation(Sg, h, sigma_net, SubstituteMode::TwoLayer);
    Network gen = substitute_activation(Sg, h, sigma_net, SubstituteMode::General);
    auto c2 = complexity(two), cg = complexity(gen);
    check_realization(rec, "calculus/substitute_activation/two_layer_realization", two, R(Sg), pts, {&Sg});
    check_realization(rec, "calculus/substitute_activation/general_realization", gen, R(two), pts, {&Sg});
    check_budget(rec, "calculus/substitute_activation/two_layer_budget",
                 c2.W <= cS.W * m * m && c2.L == cS.L && c2.N <= cS.N * m, two, {&Sg});
    check_budget(rec, "calculus/substitute_activation/general_budget",
                 cg.W <= m * cS.W + w * cS.N && cg.L <= 1 + (cS.L - 1) * ell && cg.N <= cS.N * (1 + m), gen, {&Sg});
  }
  for (const Network* n : {&A, &B, &B2, &B3, &C}) check_json_roundtrip(rec, "calculus/json_roundtrip", *n);
}

// ---- sampling helpers for d ≥ 1 gadgets ----------------------------------------

// Pieces overlapping (lo, hi) all equal q; nullopt bounds are infinite.
bool pieces_equal_on(const PiecewisePoly& f, const Poly& q, std::optional<Rational> lo, std::optional<Rational> hi) {
  const auto& br = f.breakpoints();
  const auto& ps = f.pieces();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    bool after_lo = !lo || k == br.size() || compare(br[k], Real(*lo)) > 0;
    bool before_hi = !hi || k == 0 || compare(br[k - 1], Real(*hi)) < 0;
    if (after_lo && before_hi && !(ps[k] == q)) return false;
  }
  return true;
}

// 0 ≤ f ≤ 1 on [a, b] (exact sup of |f − 1/2|).
bool within_unit(const PiecewisePoly& f, const Rational& a, const Rational& b) {
  PiecewisePoly c = f - PiecewisePoly(Poly::constant(Rational(1, 2)));
  return lp_norm(c, INFINITY, a, b).hi <= Rational(1, 2);
}

// Exact indicator bound on the line t ↦ base + t e_axis for the box
// [0,1]^d with margin eps. Inside the shrunk box h = 1, outside the box h = 0,
// in between 0 ≤ h ≤ 1.
bool indicator_slice_ok(const Network& h, const RVec& base, std::size_t axis, const Rational& eps) {
  PiecewisePoly s = extract_slice(h, base, axis).front();
  bool others_in = true, others_core = true;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (i == axis) continue;
    others_in = others_in && base[i] >= 0 && base[i] <= 1;
    others_core = others_core && base[i] >= eps && base[i] <= 1 - eps;
  }
  if (!others_in) return pieces_equal_on(s, Poly(), std::nullopt, std::nullopt);
  if (!pieces_equal_on(s, Poly(), std::nullopt, Rational(0)) || !pieces_equal_on(s, Poly(), Rational(1), std::nullopt))
    return false;
  if (others_core && !pieces_equal_on(s, Poly::constant(1), eps, 1 - eps)) return false;
  return within_unit(s, 0, 1);
}

// ∫∫ (1_Q − h) over Q = [0,1]² with slices exact in y and Gauss–Legendre in x
// on 64 cells.
double indicator_l1_error_2d(const Network& h) {
  using GL = boost::math::quadrature::gauss<double, 10>;
  const int cells = 64;
  double total = 0;
  for (int c = 0; c < cells; ++c) {
    double lo = double(c) / cells, half = 0.5 / cells, mid = lo + half;
    const auto& ab = GL::abscissa();
    const auto& wt = GL::weights();
    for (std::size_t k = 0; k < ab.size(); ++k)
      for (double z : {ab[k], -ab[k]}) {
        Rational x = from_double(mid + half * z);
        PiecewisePoly s = extract_slice(h, {x, 0}, 1).front();
        RInterval in = integral(s, 0, 1);
        total += wt[k] * half * (1 - in.mid().get_d());
      }
  }
  return total;
}

std::size_t ceil_log2(std::size_t d) {
  std::size_t j = 0;
  while ((std::size_t(1) << j) < d) ++j;
  return j;
}

// Random point in [lo, hi]^d on a 1/64 grid.
RVec grid_point(SplitMix64& rng, std::size_t d, const Rational& lo, const Rational& hi) {
  RVec x;
  for (std::size_t i = 0; i < d; ++i) {
    Rational u(static_cast<long>(rng.below(65)), 64);
    u.canonicalize();
    x.push_back(lo + (hi - lo) * u);
  }
  return x;
}

}  // namespace

void check_calculus(Recorder& rec, const SuiteOptions& opt) {
  fan_out(rec, "calculus", opt.trials, opt.parallel,
          [&](Recorder& r, std::size_t t) { calculus_trial(r, opt.seed, t, opt.points); });
  // Fixed examples.
  Network net13 = affine_network(AffineMap(4, 1, {{0, 0, 1}, {1, 0, 2}, {2, 0, 3}, {3, 0, 4}}, RVec(4)));
  Network pre = deepen(net13, 1);
  rec.check("calculus/deepen/prepends_when_d_lt_k",
            pre.depth() == 2 && pre.layers[0].map == AffineMap::identity(1) && complexity(pre).W == 5);
  Network one = cartesian({squash_net(1)});
  rec.check("calculus/cartesian/single_unchanged", same_network(one, squash_net(1)));
  Network deep = cartesian({squash_net(1), deepen(squash_net(1), 2)});
  rec.check("calculus/cartesian/delta_example", complexity(deep).W == 2 * complexity(squash_net(1)).W + 2 + 2);
}

void check_roundtrip(Recorder& rec, const SuiteOptions& opt) {
  fan_out(rec, "roundtrip", opt.trials, opt.parallel, [&](Recorder& r, std::size_t t) {
    SplitMix64 rng = SplitMix64(opt.seed ^ 0x5eed).split(t);
    RandomNetSpec spec;
    spec.d_in = static_cast<std::size_t>(rng.between(1, 3));
    spec.d_out = static_cast<std::size_t>(rng.between(1, 3));
    spec.r = 1 + static_cast<unsigned>(rng.below(3));
    spec.identity_percent = 25;
    for (int i = 0; i < 5; ++i) check_json_roundtrip(r, "roundtrip/random", random_network(spec, rng));
  });
  std::vector<Network> gadgets{squash_net(2), bspline_net(3), mult_net(3, 2), tensor_bspline_net(2, 2),
                               sawtooth_net({5, 2, SawtoothVariant::Neurons, 3}),
                               indicator_net(2, {{0, 1}, {0, 1}}, Rational(1, 8), squash_net(2)).net};
  for (const auto& g : gadgets) check_json_roundtrip(rec, "roundtrip/gadgets", g);
}

void check_sawtooth(Recorder& rec, const SuiteOptions& opt) {
  struct Job {
    unsigned j;
    std::size_t L;
    SawtoothVariant v;
  };
  std::vector<Job> jobs;
  for (unsigned j = 1; j <= 12; ++j)
    for (std::size_t L = 2; L <= 6; ++L)
      for (auto v : {SawtoothVariant::Weights, SawtoothVariant::Neurons}) jobs.push_back({j, L, v});
  fan_out(rec, "sawtooth", jobs.size(), opt.parallel, [&](Recorder& r, std::size_t i) {
    const Job& job = jobs[i];
    Network net = sawtooth_net({job.j, 1, job.v, job.L});
    auto c = complexity(net);
    auto witness = [&] {
      return Json{{"j", job.j}, {"L", job.L}, {"variant", job.v == SawtoothVariant::Weights ? "weights" : "neurons"},
                  {"complexity", complexity_json(net)}};
    };
    PiecewisePoly pw = extract_pieces(net);
    r.check("sawtooth/exact_pieces", pw == sawtooth_pw(job.j), witness);
    r.check("sawtooth/piece_count", pw.count_pieces() == 2 + (std::size_t(1) << job.j), witness);
    r.check("sawtooth/depth", c.L == job.L, witness);
    bool budget = job.v == SawtoothVariant::Weights ? within_sawtooth_budget(c.W, job.L, job.j, job.L / 2)
                                                    : within_sawtooth_budget(c.N, job.L, job.j, job.L - 1);
    r.check(job.v == SawtoothVariant::Weights ? "sawtooth/weight_budget" : "sawtooth/neuron_budget", budget, witness);
  });
  // Multivariate slices: Δ_{j,d}(x) = Δ_j(x_1).
  SplitMix64 rng = SplitMix64(opt.seed).split(0x5a);
  for (unsigned j : {1u, 4u, 7u}) {
    Network net = sawtooth_net({j, 3, SawtoothVariant::Weights, 4});
    bool ok = true;
    for (int i = 0; i < 50 && ok; ++i) {
      RVec x = grid_point(rng, 3, -1, 2);
      ok = evaluate(net, x)[0] == sawtooth_eval(j, x[0]);
    }
    rec.check("sawtooth/multidim_slice", ok, [&] { return Json{{"j", j}}; });
  }
}

void check_gadget_exactness(Recorder& rec, const SuiteOptions& opt) {
  SplitMix64 root(opt.seed ^ 0x9add);
  // Products.
  for (std::size_t d = 2; d <= 4; ++d)
    for (unsigned r : {2u, 3u}) {
      Network m = mult_net(d, r);
      auto c = complexity(m);
      std::size_t n = 2 * (r + 1), j = ceil_log2(d), p = (std::size_t(1) << j) - 1;
      auto w = [&] { return Json{{"d", d}, {"r", r}, {"complexity", complexity_json(m)}}; };
      rec.check("gadgets/mult/budget", c.W <= 6 * n * p && c.L == 2 * j && c.N + 1 <= (2 * n + 1) * p, w);
      SplitMix64 rng = root.split(d * 10 + r);
      bool ok = true;
      RVec bad;
      for (int i = 0; i < 500 && ok; ++i) {
        RVec x;
        for (std::size_t k = 0; k < d; ++k) x.push_back(random_rational(rng, 20, 16));
        Rational prod = 1;
        for (const auto& v : x) prod *= v;
        ok = evaluate(m, x)[0] == prod;
        if (!ok) bad = x;
      }
      rec.check("gadgets/mult/exact_500", ok, [&] { return Json{{"d", d}, {"r", r}, {"input", vec_json(bad)}}; });
    }
  for (std::size_t k = 1; k <= 3; ++k) {
    Network m = scalar_vector_mult_net(k, 2);
    auto c = complexity(m);
    std::size_t n = 6;
    rec.check("gadgets/scalar_vector_mult/budget", c.W <= 6 * k * n && c.L == 2 && c.N <= 2 * k * n);
    SplitMix64 rng = root.split(100 + k);
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
      RVec x = random_point(rng, 1 + k);
      RVec want;
      for (std::size_t q = 0; q < k; ++q) want.push_back(x[0] * x[q + 1]);
      ok = evaluate(m, x) == want;
    }
    rec.check("gadgets/scalar_vector_mult/exact", ok);
  }
  // Squashing functions.
  for (unsigned r = 1; r <= 4; ++r) {
    Network s = squash_net(r);
    auto c = complexity(s);
    rec.check("gadgets/squash/budget", c.W == 2 * (r + 1) && c.L == 2 && c.N == r + 1 && is_strict(s));
    rec.check("gadgets/squash/exact_squashing", satisfies_squashing(extract_pieces(s)), [&] { return Json{{"r", r}}; });
  }
  // B-splines.
  for (unsigned n = 1; n <= 4; ++n) {
    Network b = bspline_net(n);
    auto c = complexity(b);
    PiecewisePoly pw = extract_pieces(b);
    rec.check("gadgets/bspline/budget", c.L == 2 && c.N == n + 2);
    rec.check("gadgets/bspline/unit_integral", integral(pw, -1, n + 2).lo == 1 && integral(pw, -1, n + 2).hi == 1);
    rec.check("gadgets/bspline/support",
              pieces_equal_on(pw, Poly(), std::nullopt, Rational(0)) && pieces_equal_on(pw, Poly(), Rational(n + 1), std::nullopt));
  }
  for (std::size_t d = 1; d <= 3; ++d) {
    unsigned t = 2;
    Network tb = tensor_bspline_net(d, t);
    auto c = complexity(tb);
    bool ok = d == 1 ? (c.W <= 2 * (t + 2) && c.L == 2 && c.N <= t + 2)
                     : (c.W <= 28 * d * (t + 1) && c.N <= 13 * d * (t + 1) && c.L == 2 + 2 * ceil_log2(d));
    rec.check("gadgets/tensor_bspline/budget", ok, [&] { return Json{{"d", d}, {"complexity", complexity_json(tb)}}; });
    PiecewisePoly beta = extract_pieces(bspline_net(t));
    SplitMix64 rng = root.split(200 + d);
    bool exact = true;
    for (int i = 0; i < 100 && exact; ++i) {
      RVec x = grid_point(rng, d, -1, 4);
      Rational want = 1;
      for (const auto& v : x) want *= beta(v);
      exact = evaluate(tb, x)[0] == want;
    }
    rec.check("gadgets/tensor_bspline/exact", exact, [&] { return Json{{"d", d}}; });
  }
  // Indicators.
  for (unsigned r : {1u, 2u}) {
    Network sigma = squash_net(r);
    auto cs = complexity(sigma);
    for (std::size_t d = 1; d <= 2; ++d)
      for (long den : {4L, 8L, 16L}) {
        Rational eps(1, den);
        Rect unit(d, {Rational(0), Rational(1)});
        IndicatorNet ind = indicator_net(d, unit, eps, sigma);
        auto c = complexity(ind.net);
        auto w = [&] {
          return Json{{"r", r}, {"d", d}, {"eps", to_string(eps)}, {"complexity", complexity_json(ind.net)}};
        };
        bool budget = ind.shortcut ? (c.W <= 2 * cs.W && c.L == cs.L && c.N <= 2 * cs.N)
                                   : (c.W <= 2 * d * cs.W * (cs.N + 1) && c.L <= 2 * cs.L - 1 && c.N <= (2 * d + 1) * cs.N);
        rec.check("gadgets/indicator/budget", budget, w);
        double bound = 1 - std::pow(1 - 2 * eps.get_d(), static_cast<double>(d));
        double err;
        if (d == 1) {
          PiecewisePoly h = extract_pieces(ind.net);
          PiecewisePoly box = linear_interpolant({0, 1}, {1, 1}).restricted(0, 1);
          NormValue e = lp_distance(h, box, 1, -1, 2);
          err = e.hi.get_d();
          rec.check("gadgets/indicator/pointwise_bound", indicator_slice_ok(ind.net, {0}, 0, eps), w);
          rec.check("gadgets/indicator/l1_bound", e.hi <= 1 - (1 - 2 * eps), w);
        } else {
          err = indicator_l1_error_2d(ind.net);
          bool slices = true;
          for (long a = -1; a <= 17 && slices; a += 3) {
            Rational base(a, 16);
            base.canonicalize();
            slices = indicator_slice_ok(ind.net, {base, 0}, 1, eps) && indicator_slice_ok(ind.net, {0, base}, 0, eps);
          }
          rec.check("gadgets/indicator/pointwise_bound", slices, w);
          rec.check("gadgets/indicator/l1_bound", err <= bound, w);
        }
        (void)err;
      }
  }
  // Localization.
  for (std::size_t trial = 0; trial < 6; ++trial) {
    SplitMix64 rng = root.split(300 + trial);
    RandomNetSpec spec;
    spec.d_in = 1 + trial % 2;
    spec.d_out = 1 + (trial / 2) % 2;
    spec.r = 2;
    spec.max_L = 3;
    spec.max_W = 12;
    Network g = random_network(spec, rng);
    if (complexity(g).N == 0) g = compose_stacked(g, affine_network(AffineMap::identity(g.d_out())));
    Rational R = 1 + trial % 2, delta(1, 2);
    LocalizeNet loc = localize_net(g, R, delta, 2);
    auto cg = complexity(g), cl = complexity(loc.net);
    auto w = [&] {
      return Json{{"g", to_json(g)}, {"R", to_string(R)}, {"constant", loc.constant}, {"complexity", complexity_json(loc.net)}};
    };
    rec.check("gadgets/localize/budget",
              cl.W <= loc.constant * cg.W && cl.N <= loc.constant * cg.N && cl.L <= loc.depth_bound, w);
    bool inside = true, outside = true, between = true;
    for (int i = 0; i < 60; ++i) {
      RVec x = grid_point(rng, g.d_in(), -R - delta - 1, R + delta + 1);
      RVec gv = evaluate(g, x), lv = evaluate(loc.net, x);
      bool in = true, out = false;
      for (const auto& v : x) {
        in = in && v >= -R && v <= R;
        out = out || v < -R - delta || v > R + delta;
      }
      if (in) inside = inside && lv == gv;
      else if (out) outside = outside && std::all_of(lv.begin(), lv.end(), [](const Rational& q) { return q == 0; });
      else
        for (std::size_t q = 0; q < gv.size(); ++q) between = between && abs(lv[q]) <= abs(gv[q]);
    }
    rec.check("gadgets/localize/equal_inside", inside, w);
    rec.check("gadgets/localize/zero_outside", outside, w);
    rec.check("gadgets/localize/bounded_between", between, w);
  }
}

namespace {

struct CensusNet {
  Network net;
  PiecewisePoly pw;
  unsigned r;
};

void pieces_trial(Recorder& rec, const Network& net, unsigned r) {
  auto c = complexity(net);
  PiecewisePoly pw = extract_pieces(net);
  auto w = [&] { return Json{{"network", to_json(net)}, {"r", r}, {"pieces", pw.count_pieces()}}; };
  // Dense sampling oracle on a window around all breakpoints.
  Rational lo = -8, hi = 8;
  if (!pw.breakpoints().empty()) {
    lo = std::min<Rational>(lo, rational_below(pw.breakpoints().front()) - 1);
    hi = std::max<Rational>(hi, rational_above(pw.breakpoints().back()) + 1);
  }
  bool agree = true;
  Rational bad;
  for (int i = 0; i < 10000 && agree; ++i) {
    Rational u(i, 9999);
    u.canonicalize();
    Rational x = lo + (hi - lo) * u;
    agree = evaluate(net, {x})[0] == pw(x);
    if (!agree) bad = x;
  }
  rec.check("pieces/sampling_oracle", agree, [&] {
    Json j = w();
    j["input"] = to_string(bad);
    return j;
  });
  // Every piece checked at interior points.
  bool interior = true;
  const auto& br = pw.breakpoints();
  for (std::size_t k = 0; k < pw.count_pieces() && interior; ++k) {
    const Real* a = k == 0 ? nullptr : &br[k - 1];
    const Real* b = k == br.size() ? nullptr : &br[k];
    Rational x = point_between(a, b);
    interior = evaluate(net, {x})[0] == pw.pieces()[k](x);
  }
  rec.check("pieces/interior_points", interior, w);
  std::size_t maxdeg = 1;
  for (std::size_t l = 1; l < c.L; ++l) maxdeg *= r;
  rec.check("pieces/degree_bound", pw.max_degree() <= static_cast<int>(maxdeg), w);
  rec.check("pieces/weight_bound", Integer(pw.count_pieces()) <= piece_bound(c.W, c.N, c.L, r, BoundMode::Weights), w);
  rec.check("pieces/neuron_bound", Integer(pw.count_pieces()) <= piece_bound(c.W, c.N, c.L, r, BoundMode::Neurons), w);
  rec.check("pieces/continuous", pw.is_continuous(), w);
  std::size_t deg = static_cast<std::size_t>(std::max(pw.max_degree(), 0));
  rec.check("pieces/crossing_bound", crossing_number(pw) <= pw.count_pieces() * (1 + deg), w);
}

Network census_net(std::uint64_t seed, std::size_t t, unsigned r) {
  SplitMix64 rng = SplitMix64(seed).split(t * 4 + r);
  RandomNetSpec spec;
  spec.r = r;
  spec.identity_percent = 10;
  return random_network(spec, rng);
}

}  // namespace

void check_pieces(Recorder& rec, const SuiteOptions& opt) {
  std::size_t n1 = opt.trials, n2 = std::max<std::size_t>(1, opt.trials / 4);
  fan_out(rec, "pieces", n1 + n2, opt.parallel, [&](Recorder& r, std::size_t t) {
    unsigned deg = t < n1 ? 1 : 2;
    pieces_trial(r, census_net(opt.seed, t, deg), deg);
  });
  rec.check("pieces/example_ramp",
            extract_pieces(pw_affine_net(linear_interpolant({0, 1}, {0, 1}))).count_pieces() == 3);
  rec.check("pieces/example_constant", extract_pieces(constant_network({5}, 1)).count_pieces() == 1);
  rec.check("pieces/example_bspline2", extract_pieces(bspline_net(2)).count_pieces() == 5);
}

void check_crossing(Recorder& rec, const SuiteOptions& opt) {
  for (unsigned j = 1; j <= 14; ++j) {
    std::size_t cr = crossing_number(sawtooth_pw(j));
    rec.check("crossing/sawtooth_exact", cr == 1 + (std::size_t(1) << j),
              [&] { return Json{{"j", j}, {"crossing_number", cr}}; });
  }
  rec.check("crossing/constant_zero", crossing_number(PiecewisePoly()) == 1);
  // Crossing bound on a census of ϱ_1 and ϱ_2 networks.
  std::size_t n1 = opt.trials, n2 = std::max<std::size_t>(1, opt.trials / 4);
  fan_out(rec, "crossing", n1 + n2, opt.parallel, [&](Recorder& r, std::size_t t) {
    unsigned deg = t < n1 ? 1 : 2;
    Network net = census_net(opt.seed ^ 0xc7, t, deg);
    PiecewisePoly pw = extract_pieces(net);
    std::size_t md = static_cast<std::size_t>(std::max(pw.max_degree(), 0));
    r.check("crossing/census_bound", crossing_number(pw) <= pw.count_pieces() * (1 + md),
            [&] { return Json{{"network", to_json(net)}}; });
  });
  // Telgarsky pairs.
  std::size_t pairs = std::max<std::size_t>(opt.trials, 1);
  fan_out(rec, "crossing", pairs, opt.parallel, [&](Recorder& r, std::size_t t) {
    SplitMix64 rng = SplitMix64(opt.seed ^ 0x7e1).split(t);
    PiecewisePoly f = t % 2 == 0 ? sawtooth_pw(static_cast<unsigned>(rng.between(2, 8)))
                                 : extract_pieces(census_net(opt.seed ^ 0xf, t, 1));
    PiecewisePoly g = extract_pieces(census_net(opt.seed ^ 0x9, t, 1 + static_cast<unsigned>(t % 3 == 0)));
    Rational frac = disagreement_fraction(f, g), bound = telgarsky_bound(crossing_number(f), crossing_number(g));
    r.check("crossing/telgarsky_pairs", frac >= bound, [&] {
      return Json{{"f", to_json(f)}, {"g", to_json(g)}, {"fraction", to_string(frac)}, {"bound", to_string(bound)}};
    });
  });
  {
    PiecewisePoly f = sawtooth_pw(6);
    Rational frac = disagreement_fraction(f, PiecewisePoly());
    rec.check("crossing/telgarsky_sawtooth_vs_zero", frac >= telgarsky_bound(65, 1));
    rec.check("crossing/telgarsky_self", telgarsky_bound(crossing_number(f), crossing_number(f)) <= 0);
    PiecewisePoly s8 = sawtooth_pw(8);
    FreeKnotResult fit = best_free_knot(s8, 4, 1, 1, 8, opt.parallel);
    rec.check("crossing/telgarsky_dp_approx",
              disagreement_fraction(s8, fit.approximant) >=
                  telgarsky_bound(crossing_number(s8), crossing_number(fit.approximant)));
  }
}

void check_inapprox(Recorder& rec, const SuiteOptions& opt) {
  for (unsigned j = 4; j <= 8; ++j) {
    std::size_t N = ((std::size_t(1) << j) + 1) / 8, full = std::size_t(1) << j;
    auto fits = best_free_knot(sawtooth_pw(j), std::vector<std::size_t>{N, full}, 1, 1, opt.resolution, opt.parallel);
    const FreeKnotResult& a = fits[0];
    rec.check("inapprox/lower_constant", a.error_pow_lo >= Rational(1, 32), [&] {
      return Json{{"j", j}, {"N", N}, {"dp_error", a.error}, {"bound", 1.0 / 32}};
    });
    rec.check("inapprox/representable_zero", fits[1].error_pow_hi == 0,
              [&] { return Json{{"j", j}, {"N", full}, {"dp_error", fits[1].error}}; });
  }
  bool refused = false;
  try {
    sawtooth_inapprox_check(4, 32, 1, 1, opt.resolution);
  } catch (const std::invalid_argument&) {
    refused = true;
  }
  rec.check("inapprox/precondition_refused", refused);
  FreeKnotResult many = best_free_knot(sawtooth_pw(4), 32, 1, 1, 6, opt.parallel);
  rec.check("inapprox/large_budget_below_constant", many.error < 1.0 / 32);
  FreeKnotResult half = best_free_knot(sawtooth_pw(2), 1, 1, INFINITY, 6, opt.parallel);
  rec.check("inapprox/constant_half", half.error_pow_lo == Rational(1, 2) && half.error_pow_hi == Rational(1, 2));
}

void check_besov(Recorder& rec, const SuiteOptions&) {
  for (double p : {1.0, 2.0})
    for (unsigned j = 1; j <= 10; ++j) {
      Rational h(1, Integer(1) << (j + 1));
      double w = modulus(sawtooth_pw(j), 2, p, h).value;
      double bound = std::pow(2.0, -1 / p) * std::pow(p + 1, -1 / p);
      rec.check("besov/modulus_lower_bound", w >= bound,
                [&] { return Json{{"j", j}, {"p", p}, {"omega", w}, {"bound", bound}}; });
    }
  std::vector<double> b;
  for (unsigned j = 5; j <= 10; ++j) b.push_back(besov_lower(sawtooth_pw(j), 1, 2, INFINITY));
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    rec.check("besov/growth_per_level", b[i + 1] >= std::pow(2.0, 0.99) * b[i],
              [&] { return Json{{"j", 5 + i}, {"ratio", b[i + 1] / b[i]}}; });
  rec.check("besov/omega2_hat_sup", modulus(sawtooth_pw(1), 2, INFINITY, Rational(1, 2)).value == 2);
  rec.check("besov/constant_zero", besov_lower(PiecewisePoly(Poly::constant(3)), 1, 2, INFINITY) == 0);
  auto table = modulus_table(sawtooth_pw(4), 2, 1, {Rational(1, 64), Rational(1, 16), Rational(3, 32), Rational(1, 4)});
  bool mono = true;
  for (std::size_t i = 1; i < table.samples.size(); ++i) mono = mono && table.samples[i].second >= table.samples[i - 1].second;
  rec.check("besov/modulus_monotone", mono);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"calculus", "gadgets", "pieces", "crossing", "inapprox", "besov", "all"};
  return names;
}

Recorder run_suite(const std::string& suite, const SuiteOptions& opt) {
  Recorder rec;
  bool all = suite == "all";
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  if (all || suite == "calculus") {
    check_calculus(rec, opt);
    check_roundtrip(rec, opt);
  }
  if (all || suite == "gadgets") {
    check_sawtooth(rec, opt);
    check_gadget_exactness(rec, opt);
  }
  if (all || suite == "pieces") check_pieces(rec, opt);
  if (all || suite == "crossing") check_crossing(rec, opt);
  if (all || suite == "inapprox") check_inapprox(rec, opt);
  if (all || suite == "besov") check_besov(rec, opt);
  return rec;
}

Json suite_report(const std::string& suite, const SuiteOptions& opt, const Recorder& rec) {
  return Json{{"format", "nncalc-verify-v1"},
              {"suite", suite},
              {"seed", opt.seed},
              {"trials", opt.trials},
              {"resolution", opt.resolution},
              {"assertions", rec.to_json()},
              {"summary",
               {{"assertions", rec.entries().size()},
                {"checks", rec.checks()},
                {"failed", rec.failures()},
                {"status", rec.failures() ? "fail" : "pass"}}}};
}

}  // namespace nncalc
