#pragma once

#include "nncalc/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace nncalc {

using Float = boost::multiprecision::mpfr_float;

// A scalar activation known only through its evaluators.
struct CustomActivation {
  std::string name;
  std::function<Float(const Float&)> eval;
  // (x0, σ'(x0)), needed by strictify_approx.
  std::optional<std::pair<Rational, Rational>> derivative_point;
  // Optional exact evaluator; when present, evaluate() accepts the activation.
  std::function<Rational(const Rational&)> exact;
  // Optional Lipschitz constant used for float error bounds.
  std::optional<double> lipschitz;
};

// Registers (or replaces, by name) a custom activation and returns its handle.
unsigned register_custom(CustomActivation act);
const CustomActivation& custom_activation(unsigned handle);
bool custom_registered(unsigned handle);
std::optional<unsigned> find_custom(const std::string& name);

}  // namespace nncalc
