#pragma once

#include "nncalc/custom.hpp"
#include "nncalc/network.hpp"

#include <mutex>
#include <vector>

namespace nncalc {

struct FloatEvaluation {
  std::vector<Float> value;
  // |value_i − exact_i| ≤ error_bound_i, assuming custom evaluators are
  // correctly rounded; +inf when a custom activation has no Lipschitz constant.
  std::vector<double> error_bound;
  unsigned precision_bits = 0;
};

// NNCALC_PRECISION_BITS, default 128.
unsigned default_precision_bits();

// RAII: sets the MPFR default precision. Boost keeps that default in a
// process-wide static, so the scope also holds a global (recursive) lock.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_digits_;
};

Float to_float(const Rational& q);

// precision_bits == 0 selects default_precision_bits().
FloatEvaluation evaluate_float(const Network& net, const std::vector<Float>& x, unsigned precision_bits = 0);
FloatEvaluation evaluate_float(const Network& net, const std::vector<double>& x, unsigned precision_bits = 0);

}  // namespace nncalc
