#pragma once

#include "nncalc/affine_map.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nncalc {

struct Activation {
  enum class Kind : std::uint8_t { Identity, Rho, Custom };
  Kind kind = Kind::Identity;
  unsigned param = 0;  // r for Rho, registry handle for Custom

  static Activation identity() { return {}; }
  static Activation rho(unsigned r) { return {Kind::Rho, r}; }
  static Activation custom(unsigned handle) { return {Kind::Custom, handle}; }

  bool is_identity() const { return kind == Kind::Identity; }
  bool is_rho() const { return kind == Kind::Rho; }
  bool is_custom() const { return kind == Kind::Custom; }
  friend bool operator==(const Activation&, const Activation&) = default;
};

struct Layer {
  AffineMap map;
  std::vector<Activation> act;
};

// A feed-forward network (T_1, α_1), ..., (T_L, α_L). Any state can be held;
// validate() reports what is wrong with it.
struct Network {
  std::vector<Layer> layers;

  std::size_t depth() const { return layers.size(); }
  std::size_t d_in() const { return layers.empty() ? 0 : layers.front().map.cols(); }
  std::size_t d_out() const { return layers.empty() ? 0 : layers.back().map.rows(); }
  // N_0, ..., N_L
  std::vector<std::size_t> widths() const;
};

struct Diagnostic {
  std::size_t layer;  // 0-based layer index
  std::string message;
};

std::vector<Diagnostic> validate(const Network& net);
// Throws std::invalid_argument listing all diagnostics.
void require_valid(const Network& net);

struct LayerStats {
  std::size_t l0, l0_col_max, l0_row_max;
};

struct ComplexityReport {
  std::size_t W = 0, N = 0, L = 0, W0 = 0;
  std::vector<LayerStats> per_layer;
};

ComplexityReport complexity(const Network& net);

// Every hidden activation is the same Rho(r).
bool is_strict(const Network& net);
// Common Rho degree of the hidden layer (0 if there are no Rho neurons);
// throws if two degrees are mixed.
unsigned rho_degree(const Network& net);
bool has_custom(const Network& net);

// Thrown by evaluate() when a Custom activation lacks an exact evaluator.
struct ExactEvaluationUnavailable : std::runtime_error {
  ExactEvaluationUnavailable() : std::runtime_error("exact evaluation unavailable, use evaluate_float") {}
};

RVec evaluate(const Network& net, const RVec& x);
// Values of every layer after activation; result[0] is the input.
std::vector<RVec> evaluate_trace(const Network& net, const RVec& x);
Rational apply_activation(const Activation& a, const Rational& z);

Network constant_network(const RVec& c, std::size_t d);

// Removes hidden neurons with a zero incoming row, folding their constant
// output into the next bias, until no such neuron remains. Collapses to a
// constant network as soon as some layer has no weights at all.
Network compress(const Network& net);

// Single-layer network realizing an affine map.
Network affine_network(const AffineMap& map);

}  // namespace nncalc
