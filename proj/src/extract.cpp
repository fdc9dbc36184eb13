#include "nncalc/extract.hpp"

#include <stdexcept>

namespace nncalc {

namespace {

std::vector<PiecewisePoly> propagate(const Network& net, std::vector<PiecewisePoly> vals) {
  for (const auto& layer : net.layers) {
    const auto& m = layer.map;
    std::vector<PiecewisePoly> next;
    next.reserve(m.rows());
    std::vector<PwTerm> terms;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      terms.clear();
      for (std::size_t k = m.row_begin(i); k < m.row_end(i); ++k) terms.push_back({m.value_at(k), &vals[m.col_at(k)]});
      PiecewisePoly z = affine_combination(terms, m.bias()[i]);
      const auto& a = layer.act[i];
      if (a.is_rho()) z = z.apply_rho(a.param);
      else if (a.is_custom()) throw std::invalid_argument("cannot extract pieces through a custom activation");
      next.push_back(std::move(z));
    }
    vals = std::move(next);
  }
  return vals;
}

}  // namespace

PiecewisePoly extract_pieces(const Network& net) {
  require_valid(net);
  if (net.d_in() != 1 || net.d_out() != 1)
    throw std::invalid_argument("extract_pieces needs a scalar-to-scalar network (d_in = d_out = 1)");
  return propagate(net, {PiecewisePoly(Poly::linear(1, 0))})[0];
}

std::vector<PiecewisePoly> extract_slice(const Network& net, const RVec& base, std::size_t axis) {
  require_valid(net);
  if (base.size() != net.d_in() || axis >= net.d_in())
    throw std::invalid_argument("slice base point or axis does not match the input dimension");
  std::vector<PiecewisePoly> in;
  for (std::size_t i = 0; i < base.size(); ++i)
    in.emplace_back(i == axis ? Poly::linear(1, base[i]) : Poly::constant(base[i]));
  return propagate(net, std::move(in));
}

Integer piece_constant(std::size_t L, unsigned r, BoundMode mode) {
  if (L == 0) throw std::invalid_argument("depth must be at least 1");
  if (L == 1) return 1;
  if (mode == BoundMode::Neurons) {
    // C_1 = 4, C_{ℓ+1} = 2 C_ℓ (1 + r^ℓ); Λ = max_{K ≤ L} C_K.
    Integer c = 4, best = 4;
    for (std::size_t l = 1; l < L; ++l) {
      Integer rl;
      mpz_ui_pow_ui(rl.get_mpz_t(), r, l);
      c = 2 * c * (1 + rl);
      if (c > best) best = c;
    }
    return best;
  }
  // C_0 = 4, C'_t = 2 C_t (1 + r^{2t+1}), C_{t+1} = 2 (1 + r^{2t+2}) C'_t.
  // Λ_K = C_{(K−1)/2} for odd K, C_{K/2−1} for even K; Θ = max_{K ≤ L} Λ_K.
  std::size_t tmax = L / 2;
  std::vector<Integer> C{4};
  for (std::size_t t = 0; t < tmax; ++t) {
    Integer p1, p2;
    mpz_ui_pow_ui(p1.get_mpz_t(), r, 2 * t + 1);
    mpz_ui_pow_ui(p2.get_mpz_t(), r, 2 * t + 2);
    Integer cp = 2 * C[t] * (1 + p1);
    C.push_back(2 * (1 + p2) * cp);
  }
  Integer best = 1;
  for (std::size_t K = 2; K <= L; ++K) {
    const Integer& lam = (K % 2 == 1) ? C[(K - 1) / 2] : C[K / 2 - 1];
    if (lam > best) best = lam;
  }
  return best;
}

Integer piece_bound(std::size_t W, std::size_t N, std::size_t L, unsigned r, BoundMode mode) {
  Integer lam = piece_constant(L, r, mode);
  Integer p;
  if (mode == BoundMode::Neurons) {
    mpz_ui_pow_ui(p.get_mpz_t(), N, L - 1);
    return lam * p;
  }
  mpz_ui_pow_ui(p.get_mpz_t(), W, L / 2);
  Integer b = lam * p;
  return b < 1 ? Integer(1) : b;
}

}  // namespace nncalc
