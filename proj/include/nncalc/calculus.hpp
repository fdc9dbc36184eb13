#pragma once

#include "nncalc/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nncalc {

// Same realization, L0 more layers: identity layers appended at the output
// when d_out ≤ d_in, prepended at the input otherwise.
Network deepen(const Network& net, std::size_t L0);

// a · R(net); a = 0 leaves a zero last map.
Network scale(const Network& net, const Rational& a);

// x ↦ (R(Φ_1)(x), ..., R(Φ_n)(x)). Nets are merged in order of increasing
// depth and the outputs are permuted back in the last map.
Network cartesian(const std::vector<Network>& nets);

// (x_1, ..., x_n) ↦ (R(Φ_1)(x_1), ..., R(Φ_n)(x_n)); shallower nets are deepened.
Network block_parallel(const std::vector<Network>& nets);

// x ↦ Σ R(Φ_i)(x).
Network sum(const std::vector<Network>& nets);

// Q ∘ R(net) ∘ P. A Q without weights collapses to a constant network.
Network pre_post_affine(const Network& net, const AffineMap& P, const AffineMap& Q);

// R(g) ∘ R(f) with the output layer of f kept as an identity hidden layer.
Network compose_stacked(const Network& f, const Network& g);

// R(g) ∘ R(f) with the last map of f merged into the first map of g.
Network compose_fused(const Network& f, const Network& g);

// Strict depth-2 ϱ_r network realizing the polynomial Σ coeffs[i] x^i
// (deg ≤ r) as p(0) + Σ_ℓ a_ℓ (x − ℓ)^r, ℓ = 0..r, with
// (x − ℓ)^r = ϱ_r(x − ℓ) + (−1)^r ϱ_r(ℓ − x).
Network represent_polynomial(const RVec& coeffs, unsigned r);

// c + Σ a_i ϱ_r(b_i x + c_i) = x.
struct IdentityRepresentation {
  struct Term {
    Rational a, b, c;
  };
  std::vector<Term> terms;
  Rational offset;
  unsigned r = 1;
  std::size_t n() const { return terms.size(); }
};

// Canonical representation: the 2-term form for r = 1, else read off
// represent_polynomial(x, r).
IdentityRepresentation identity_representation(unsigned r);
// Checks the identity at 2r+3 distinct rationals.
bool check_identity_representation(const IdentityRepresentation& rep);

// Replaces each identity hidden neuron by the n neurons of the representation.
Network strictify(const Network& net, const IdentityRepresentation& rep);
// Uses identity_representation(rho_degree(net)) (r = 1 when there is no Rho).
Network strictify(const Network& net);

enum class SubstituteMode { TwoLayer, General };

// net uses Custom(sigma) on some hidden neurons (the others Identity);
// sigma_net is a scalar network realizing σ. Returns a network over the
// activations of sigma_net with the same realization.
Network substitute_activation(const Network& net, unsigned sigma, const Network& sigma_net, SubstituteMode mode);

// Each Rho(r^s) neuron becomes a chain of s Rho(r) neurons; identity neurons
// become identity chains.
Network power_unroll(const Network& net, unsigned r, unsigned s);

struct StrictifyApprox {
  Network net;
  Rational delta;   // δ_m
  Rational scale;   // s ≈ √m
  double sup_error; // max |R(out) − R(net)| on the probe grid
  double probe_radius;
};

// Strict σ-network approximating a generalized σ-network (σ = Custom). Each
// identity neuron z becomes (σ(x₀ + δ z/s) − σ(x₀))·s/(σ′(x₀)δ); the σ(x₀)
// terms come from one extra constant neuron per layer. sup_error is sampled
// on [−K, K]^d (K = probe_radius) with evaluate_float.
StrictifyApprox strictify_approx(const Network& net, unsigned sigma, unsigned m, double probe_radius = 1.0);

// Registers σ := R(sigma_net) as a Custom activation with exact and float
// evaluators; returns its handle.
unsigned register_network_activation(const std::string& name, const Network& sigma_net);

}  // namespace nncalc
