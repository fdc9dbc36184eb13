#include "nncalc/calculus.hpp"

#include "nncalc/custom.hpp"
#include "nncalc/evaluate_float.hpp"
#include "nncalc/extract.hpp"

#include <cmath>
#include <stdexcept>

namespace nncalc {

namespace {

// Solves M a = rhs over Q (M square, invertible).
RVec solve(std::vector<RVec> M, RVec rhs) {
  std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && M[p][c] == 0) ++p;
    if (p == n) throw std::runtime_error("singular system");
    std::swap(M[p], M[c]);
    std::swap(rhs[p], rhs[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || M[r][c] == 0) continue;
      Rational f = M[r][c] / M[c][c];
      for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / M[i][i];
  return x;
}

struct Replacement {
  Rational a, b, c;
  Activation act;
};

// Neuron i of hidden layer l becomes offset[i] + Σ_t a_t act_t(b_t z_i + c_t)
// where z_i is its pre-activation.
void expand_layer(Network& net, std::size_t l, const std::vector<std::vector<Replacement>>& reps,
                  const RVec& offsets) {
  const AffineMap& T = net.layers[l].map;
  const AffineMap& U = net.layers[l + 1].map;
  std::vector<std::size_t> first(reps.size() + 1, 0);
  for (std::size_t i = 0; i < reps.size(); ++i) first[i + 1] = first[i] + reps[i].size();
  std::size_t rows = first.back();

  std::vector<Entry> te;
  RVec tb(rows);
  std::vector<Activation> act(rows);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t t = 0; t < reps[i].size(); ++t) {
      const auto& rp = reps[i][t];
      std::size_t row = first[i] + t;
      for (std::size_t k = T.row_begin(i); k < T.row_end(i); ++k) te.push_back({row, T.col_at(k), rp.b * T.value_at(k)});
      tb[row] = rp.b * T.bias()[i] + rp.c;
      act[row] = rp.act;
    }
  }
  std::vector<Entry> ue;
  RVec ub = U.bias();
  for (std::size_t r = 0; r < U.rows(); ++r) {
    for (std::size_t k = U.row_begin(r); k < U.row_end(r); ++k) {
      std::size_t i = U.col_at(k);
      const Rational& w = U.value_at(k);
      for (std::size_t t = 0; t < reps[i].size(); ++t) ue.push_back({r, first[i] + t, w * reps[i][t].a});
      if (offsets[i] != 0) ub[r] += w * offsets[i];
    }
  }
  net.layers[l] = {AffineMap(rows, T.cols(), std::move(te), std::move(tb)), std::move(act)};
  net.layers[l + 1].map = AffineMap::accumulate(U.rows(), rows, std::move(ue), std::move(ub));
}

Network line_network(const Network& sigma_net) {
  require_valid(sigma_net);
  if (sigma_net.d_in() != 1 || sigma_net.d_out() != 1)
    throw std::invalid_argument("sigma network must be scalar-to-scalar");
  return sigma_net;
}

}  // namespace

Network represent_polynomial(const RVec& coeffs, unsigned r) {
  if (r == 0) throw std::invalid_argument("rho degree must be positive");
  Poly p(coeffs);
  if (p.degree() > static_cast<int>(r))
    throw std::invalid_argument("polynomial degree " + std::to_string(p.degree()) + " exceeds r = " + std::to_string(r));
  Rational p0 = p.coeff(0);
  // Σ_ℓ a_ℓ (x − ℓ)^r = p − p0; coefficient of x^i in (x − ℓ)^r is C(r,i)(−ℓ)^{r−i}.
  std::vector<RVec> M(r + 1, RVec(r + 1));
  RVec rhs(r + 1);
  for (unsigned i = 0; i <= r; ++i) {
    for (unsigned l = 0; l <= r; ++l) M[i][l] = Rational(binomial(r, i)) * pow(Rational(-static_cast<long>(l)), r - i);
    rhs[i] = i == 0 ? Rational(0) : p.coeff(i);
  }
  RVec a = solve(M, rhs);
  std::vector<Entry> te, ue;
  RVec tb;
  std::size_t row = 0;
  Rational sgn_r = r % 2 == 0 ? 1 : -1;
  for (unsigned l = 0; l <= r; ++l) {
    if (a[l] == 0) continue;
    te.push_back({row, 0, Rational(1)});
    tb.push_back(Rational(-static_cast<long>(l)));
    ue.push_back({0, row, a[l]});
    ++row;
    te.push_back({row, 0, Rational(-1)});
    tb.push_back(Rational(static_cast<long>(l)));
    ue.push_back({0, row, sgn_r * a[l]});
    ++row;
  }
  if (row == 0) {
    // Constant: one hidden neuron without weights keeps the net strict with L = 2.
    tb.push_back(0);
    row = 1;
  }
  Network net;
  net.layers.push_back({AffineMap(row, 1, std::move(te), std::move(tb)), std::vector<Activation>(row, Activation::rho(r))});
  net.layers.push_back({AffineMap(1, row, std::move(ue), RVec{p0}), {Activation::identity()}});
  return net;
}

IdentityRepresentation identity_representation(unsigned r) {
  IdentityRepresentation rep;
  rep.r = r;
  if (r == 1) {
    rep.terms = {{1, 1, 0}, {-1, -1, 0}};
    return rep;
  }
  Network net = represent_polynomial({0, 1}, r);
  const auto& T = net.layers[0].map;
  const auto& U = net.layers[1].map;
  for (std::size_t i = 0; i < T.rows(); ++i) rep.terms.push_back({U.at(0, i), T.at(i, 0), T.bias()[i]});
  rep.offset = U.bias()[0];
  return rep;
}

bool check_identity_representation(const IdentityRepresentation& rep) {
  auto value = [&](const Rational& x) {
    Rational v = rep.offset;
    for (const auto& t : rep.terms) v += t.a * rho(t.b * x + t.c, rep.r);
    return v;
  };
  long half = static_cast<long>(rep.r) + 1;
  for (long i = -half; i <= half; ++i) {
    Rational x(i, 2);
    x.canonicalize();
    if (value(x) != x) return false;
  }
  // Exact check on all of ℝ through the piecewise-polynomial engine.
  std::vector<Entry> te, ue;
  RVec tb;
  for (std::size_t i = 0; i < rep.terms.size(); ++i) {
    te.push_back({i, 0, rep.terms[i].b});
    tb.push_back(rep.terms[i].c);
    ue.push_back({0, i, rep.terms[i].a});
  }
  if (rep.terms.empty()) return false;
  Network net;
  std::size_t n = rep.terms.size();
  net.layers.push_back({AffineMap(n, 1, std::move(te), std::move(tb)), std::vector<Activation>(n, Activation::rho(rep.r))});
  net.layers.push_back({AffineMap(1, n, std::move(ue), RVec{rep.offset}), {Activation::identity()}});
  return extract_pieces(net) == PiecewisePoly(Poly::linear(1, 0));
}

Network strictify(const Network& net, const IdentityRepresentation& rep) {
  require_valid(net);
  Network out = net;
  for (std::size_t l = 0; l + 1 < out.layers.size(); ++l) {
    const auto& act = out.layers[l].act;
    std::vector<std::vector<Replacement>> reps(act.size());
    RVec offsets(act.size());
    bool changed = false;
    for (std::size_t i = 0; i < act.size(); ++i) {
      if (act[i].is_custom()) throw std::invalid_argument("strictify does not accept custom activations");
      if (act[i].is_rho()) {
        if (act[i].param != rep.r)
          throw std::invalid_argument("mixed rho degrees: network uses rho:" + std::to_string(act[i].param) +
                                      ", representation is for rho:" + std::to_string(rep.r));
        reps[i] = {{1, 1, 0, act[i]}};
        continue;
      }
      changed = true;
      for (const auto& t : rep.terms) reps[i].push_back({t.a, t.b, t.c, Activation::rho(rep.r)});
      offsets[i] = rep.offset;
    }
    if (changed) expand_layer(out, l, reps, offsets);
  }
  return out;
}

Network strictify(const Network& net) {
  unsigned r = rho_degree(net);
  return strictify(net, identity_representation(r == 0 ? 1 : r));
}

Network substitute_activation(const Network& net, unsigned sigma, const Network& sigma_net, SubstituteMode mode) {
  require_valid(net);
  Network sn = line_network(sigma_net);
  for (std::size_t l = 0; l + 1 < net.layers.size(); ++l)
    for (const auto& a : net.layers[l].act)
      if (!a.is_identity() && !(a.is_custom() && a.param == sigma))
        throw std::invalid_argument("substitute_activation: hidden neurons must be identity or the substituted activation");

  if (mode == SubstituteMode::TwoLayer) {
    if (sn.depth() != 2) throw std::invalid_argument("two-layer substitution needs a depth-2 sigma network");
    const auto& U1 = sn.layers[0].map;
    const auto& U2 = sn.layers[1].map;
    std::vector<Replacement> sig;
    for (std::size_t k = 0; k < U1.rows(); ++k) sig.push_back({U2.at(0, k), U1.at(k, 0), U1.bias()[k], sn.layers[0].act[k]});
    Network out = net;
    for (std::size_t l = 0; l + 1 < out.layers.size(); ++l) {
      const auto& act = out.layers[l].act;
      std::vector<std::vector<Replacement>> reps(act.size());
      RVec offsets(act.size());
      for (std::size_t i = 0; i < act.size(); ++i) {
        if (act[i].is_identity()) {
          reps[i] = {{1, 1, 0, Activation::identity()}};
        } else {
          reps[i] = sig;
          offsets[i] = U2.bias()[0];
        }
      }
      expand_layer(out, l, reps, offsets);
    }
    return out;
  }

  // General depth ℓ: (T_1, id), then per hidden layer the block-diagonal
  // activation network Γ (a copy of sigma_net per σ neuron, an identity chain
  // per identity neuron) whose last map is fused into the next T.
  const std::size_t ell = sn.depth();
  Network out = affine_network(net.layers[0].map);
  for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
    const auto& act = net.layers[l].act;
    Network gamma;
    for (std::size_t t = 0; t < ell; ++t) {
      std::vector<AffineMap> blocks;
      std::vector<Activation> acts;
      for (const auto& a : act) {
        if (a.is_identity()) {
          blocks.push_back(AffineMap::identity(1));
          acts.push_back(Activation::identity());
        } else {
          blocks.push_back(sn.layers[t].map);
          acts.insert(acts.end(), sn.layers[t].act.begin(), sn.layers[t].act.end());
        }
      }
      std::vector<const AffineMap*> ptrs;
      for (const auto& b : blocks) ptrs.push_back(&b);
      gamma.layers.push_back({block_diag(ptrs), std::move(acts)});
    }
    out = compose_stacked(out, gamma);
    out = compose_fused(out, affine_network(net.layers[l + 1].map));
  }
  return out;
}

Network power_unroll(const Network& net, unsigned r, unsigned s) {
  require_valid(net);
  if (r == 0 || s == 0) throw std::invalid_argument("power_unroll needs r, s >= 1");
  Integer rs;
  mpz_ui_pow_ui(rs.get_mpz_t(), r, s);
  Network out;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    if (l + 1 == net.layers.size()) {
      out.layers.push_back(layer);
      break;
    }
    std::vector<Activation> act;
    for (const auto& a : layer.act) {
      if (a.is_identity()) act.push_back(a);
      else if (a.is_rho() && Integer(a.param) == rs) act.push_back(Activation::rho(r));
      else throw std::invalid_argument("power_unroll: hidden activations must be identity or rho:" + rs.get_str());
    }
    out.layers.push_back({layer.map, act});
    for (unsigned k = 1; k < s; ++k) out.layers.push_back({AffineMap::identity(act.size()), act});
  }
  return out;
}

namespace {

bool slope_test(const CustomActivation& c, const Rational& x0, const Rational& a, unsigned m, const Rational& delta) {
  PrecisionScope scope(default_precision_bits());
  Float fx0 = c.eval(to_float(x0));
  Float fa = to_float(a);
  Float tol = abs(fa) / m;
  for (int k = -500; k <= 500; ++k) {
    if (k == 0) continue;
    Rational h = delta * Rational(k, 500);
    h.canonicalize();
    Float slope = (c.eval(to_float(x0 + h)) - fx0) / to_float(h);
    if (abs(slope - fa) > tol) return false;
  }
  return true;
}

Rational find_delta(const CustomActivation& c, const Rational& x0, const Rational& a, unsigned m) {
  Rational good = 0, bad = 0, d = 1;
  if (slope_test(c, x0, a, m, d)) {
    good = d;
    for (int i = 0; i < 20; ++i) {
      d *= 2;
      if (!slope_test(c, x0, a, m, d)) {
        bad = d;
        break;
      }
      good = d;
    }
    if (bad == 0) return good;
  } else {
    bad = d;
    for (int i = 0; i < 80 && good == 0; ++i) {
      d /= 2;
      if (slope_test(c, x0, a, m, d)) good = d;
      else bad = d;
    }
    if (good == 0) throw std::runtime_error("strictify_approx: slope test never satisfied");
  }
  for (int i = 0; i < 16; ++i) {
    Rational mid = (good + bad) / 2;
    if (slope_test(c, x0, a, m, mid)) good = mid;
    else bad = mid;
  }
  return good;
}

}  // namespace

StrictifyApprox strictify_approx(const Network& net, unsigned sigma, unsigned m, double probe_radius) {
  require_valid(net);
  if (m == 0) throw std::invalid_argument("fidelity index m must be positive");
  for (const auto& layer : net.layers)
    for (const auto& a : layer.act) {
      if (a.is_rho()) throw std::invalid_argument("rho networks are strictified exactly; use strictify");
      if (a.is_custom() && a.param != sigma) throw std::invalid_argument("network mixes custom activations");
    }
  const auto& c = custom_activation(sigma);
  if (!c.derivative_point) throw std::invalid_argument("no derivative point registered for '" + c.name + "'");
  const Rational& x0 = c.derivative_point->first;
  const Rational& a = c.derivative_point->second;
  if (a == 0) throw std::invalid_argument("derivative at the registered point must be nonzero");

  Rational delta = find_delta(c, x0, a, m);
  // s ≈ √m as a dyadic rational.
  Integer root;
  Integer scaled = Integer(m) << 40;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rational s(root, Integer(1) << 20);
  s.canonicalize();
  Rational outer = s / (a * delta);
  Rational inner = delta / s;

  Network out = net;
  for (std::size_t l = 0; l + 1 < out.layers.size(); ++l) {
    const auto act = out.layers[l].act;
    std::vector<std::vector<Replacement>> reps(act.size());
    RVec offsets(act.size());
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < act.size(); ++i) {
      if (act[i].is_custom()) {
        reps[i] = {{1, 1, 0, act[i]}};
      } else {
        reps[i] = {{outer, inner, x0, Activation::custom(sigma)}};
        ids.push_back(i);
      }
    }
    if (ids.empty()) continue;
    // Column weights of the identity neurons before expansion; the constant
    // neuron σ(x₀) subtracts outer · Σ_i U[·,i] σ(x₀).
    const AffineMap U = out.layers[l + 1].map;
    expand_layer(out, l, reps, offsets);
    auto& L = out.layers[l];
    auto te = L.map.entries();
    RVec tb = L.map.bias();
    tb.push_back(x0);
    std::size_t crow = L.map.rows();
    L.map = AffineMap(crow + 1, L.map.cols(), std::move(te), std::move(tb));
    L.act.push_back(Activation::custom(sigma));
    auto& N = out.layers[l + 1];
    auto ue = N.map.entries();
    for (std::size_t r = 0; r < U.rows(); ++r) {
      Rational w = 0;
      for (auto i : ids) w += U.at(r, i);
      if (w != 0) ue.push_back({r, crow, -outer * w});
    }
    N.map = AffineMap(N.map.rows(), crow + 1, std::move(ue), N.map.bias());
  }

  // Sup error on a probe grid of [−K, K]^d.
  std::size_t d = net.d_in();
  std::size_t per_axis = d == 1 ? 1001 : (d == 2 ? 65 : 9);
  std::vector<std::size_t> idx(d, 0);
  double worst = 0;
  for (;;) {
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k)
      x[k] = -probe_radius + 2 * probe_radius * static_cast<double>(idx[k]) / static_cast<double>(per_axis - 1);
    auto fa = evaluate_float(net, x);
    auto fb = evaluate_float(out, x);
    for (std::size_t o = 0; o < fa.value.size(); ++o)
      worst = std::max(worst, std::fabs(static_cast<double>(fa.value[o] - fb.value[o])));
    std::size_t k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }
  return {std::move(out), delta, s, worst, probe_radius};
}

unsigned register_network_activation(const std::string& name, const Network& sigma_net) {
  Network sn = line_network(sigma_net);
  CustomActivation c;
  c.name = name;
  c.exact = [sn](const Rational& x) { return evaluate(sn, {x})[0]; };
  c.eval = [sn](const Float& x) { return evaluate_float(sn, std::vector<Float>{x}).value[0]; };
  if (rho_degree(sn) <= 1) {
    // Piecewise affine: Lipschitz ≤ Π ‖T_ℓ‖_∞.
    double lip = 1;
    for (const auto& layer : sn.layers) {
      double best = 0;
      for (std::size_t i = 0; i < layer.map.rows(); ++i) {
        double row = 0;
        for (std::size_t k = layer.map.row_begin(i); k < layer.map.row_end(i); ++k)
          row += std::fabs(to_double(layer.map.value_at(k)));
        best = std::max(best, row);
      }
      lip *= best;
    }
    c.lipschitz = lip;
  }
  return register_custom(std::move(c));
}

}  // namespace nncalc
