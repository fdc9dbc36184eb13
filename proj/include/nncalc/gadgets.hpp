#pragma once

#include "nncalc/network.hpp"
#include "nncalc/pwpoly.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nncalc {

// ---- sawtooth ------------------------------------------------------------

enum class SawtoothVariant { Weights, Neurons };

struct SawtoothSpec {
  unsigned j = 1;
  std::size_t d = 1;
  SawtoothVariant variant = SawtoothVariant::Weights;
  std::size_t L = 2;
};

// Δ_j(x): 2^{j−1} hat teeth on [0, 1], zero outside. Δ_0 is clamp(x, 0, 1).
Rational sawtooth_eval(unsigned j, const Rational& x);
// Closed-form Δ_j on ℝ (2 + 2^j affine pieces for j ≥ 1).
PiecewisePoly sawtooth_pw(unsigned j);

// Depth-2 ϱ_1 network of a continuous piecewise-affine f with rational
// breakpoints: f = β + α(ϱ(x) − ϱ(−x)) + Σ c_i ϱ(x − t_i), c_i the slope jumps.
Network pw_affine_net(const PiecewisePoly& f);

Network sawtooth_net(const SawtoothSpec& spec);

// C_L = 4L + 2^{L−1}.
Integer sawtooth_constant(std::size_t L);
// count ≤ C_L · 2^{j/den}, decided exactly as count^den ≤ C_L^den · 2^j.
bool within_sawtooth_budget(std::size_t count, std::size_t L, unsigned j, std::size_t den);

// ---- splines, squashing, products ----------------------------------------

// β_+^{(n)} = (1/n!) Σ_{k=0}^{n+1} C(n+1,k)(−1)^k ϱ_n(x − k).
Network bspline_net(unsigned n);
// σ_r(x) = (1/r!) Σ_{k=0}^{r} C(r,k)(−1)^k ϱ_r(rx − k).
Network squash_net(unsigned r);

// (x_1, ..., x_d) ↦ Π x_i over ϱ_r, r ≥ 2.
Network mult_net(std::size_t d, unsigned r);
// (x, y_1, ..., y_k) ↦ (x y_1, ..., x y_k).
Network scalar_vector_mult_net(std::size_t k, unsigned r);
// x ↦ Π_j β_+^{(t)}(x_j).
Network tensor_bspline_net(std::size_t d, unsigned t);

// ---- indicators and localization -----------------------------------------

using Rect = std::vector<std::pair<Rational, Rational>>;

enum class IndicatorPath { Auto, General };

struct IndicatorNet {
  Network net;
  bool shortcut = false;  // d = 1 path h = t used
  std::vector<std::string> warnings;
};

// Checks σ = 0 on (−∞, 0], σ = 1 on [1, ∞), 0 ≤ σ ≤ 1 exactly.
bool satisfies_squashing(const PiecewisePoly& sigma);
// Exact for ϱ networks; 10⁴-point sampling (with a warning) otherwise.
bool check_squashing(const Network& sigma, std::vector<std::string>* warnings = nullptr);

// h with 0 ≤ h ≤ 1, supp h ⊆ rect, h = 1 on the ε-shrunk rectangle (relative
// to the side lengths).
IndicatorNet indicator_net(std::size_t d, const Rect& rect, const Rational& eps, const Network& sigma,
                           IndicatorPath path = IndicatorPath::Auto);

struct LocalizeNet {
  Network net;
  std::size_t constant = 0;  // c(d, k, r)
  std::size_t depth_bound = 0;
};

// g_{R,δ} = θ_{R,δ} · g where θ is the indicator of [−R−δ, R+δ]^d equal to 1
// on [−R, R]^d.
LocalizeNet localize_net(const Network& g, const Rational& R, const Rational& delta, unsigned r);

}  // namespace nncalc
