#include "nncalc/evaluate_float.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace nncalc {

unsigned default_precision_bits() {
  const char* env = std::getenv("NNCALC_PRECISION_BITS");
  if (env == nullptr || *env == '\0') return 128;
  char* end = nullptr;
  unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v < 16 || v > 100000)
    throw std::invalid_argument(std::string("bad NNCALC_PRECISION_BITS: ") + env);
  return static_cast<unsigned>(v);
}

namespace {

std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}

unsigned bits_to_digits10(unsigned bits) { return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1; }

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits)
    : lock_(precision_mutex()), saved_digits_(Float::default_precision()) {
  Float::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Float::default_precision(saved_digits_); }

Float to_float(const Rational& q) {
  Float f;
  mpfr_set_q(f.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return f;
}

FloatEvaluation evaluate_float(const Network& net, const std::vector<Float>& x, unsigned precision_bits) {
  require_valid(net);
  if (x.size() != net.d_in())
    throw std::invalid_argument("input has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(net.d_in()));
  if (precision_bits == 0) precision_bits = default_precision_bits();
  PrecisionScope scope(precision_bits);

  FloatEvaluation out;
  std::vector<Float> y;
  y.reserve(x.size());
  for (const auto& v : x) y.emplace_back(v);
  out.precision_bits = static_cast<unsigned>(mpfr_get_prec(y.front().backend().data()));
  const double u = std::ldexp(1.0, -static_cast<int>(out.precision_bits));
  std::vector<double> e(x.size(), 0.0);
  const double inf = std::numeric_limits<double>::infinity();

  for (const auto& layer : net.layers) {
    const auto& m = layer.map;
    std::vector<Float> z(m.rows());
    std::vector<double> ez(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Float acc = to_float(m.bias()[i]);
      double mag = std::fabs(static_cast<double>(acc));
      double prop = 0.0;
      std::size_t n = 1;
      for (std::size_t k = m.row_begin(i); k < m.row_end(i); ++k) {
        Float a = to_float(m.value_at(k));
        const auto& yj = y[m.col_at(k)];
        Float t = a * yj;
        acc += t;
        mag += std::fabs(static_cast<double>(t));
        prop += std::fabs(static_cast<double>(a)) * e[m.col_at(k)];
        ++n;
      }
      // Each coefficient conversion, product and sum rounds once.
      double gamma = (2.0 * n + 1.0) * u / (1.0 - (2.0 * n + 1.0) * u);
      z[i] = std::move(acc);
      ez[i] = prop * (1.0 + u) + gamma * mag * (1.0 + 4 * u);
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
      const auto& a = layer.act[i];
      if (a.is_identity()) continue;
      if (a.is_rho()) {
        double zmag = std::fabs(static_cast<double>(z[i]));
        double ein = ez[i];
        if (z[i] <= 0) {
          z[i] = 0;
        } else {
          Float base = z[i];
          for (unsigned k = 1; k < a.param; ++k) z[i] *= base;
        }
        unsigned r = a.param;
        double lip = r * std::pow(zmag + ein, static_cast<double>(r - 1));
        double rnd = (r - 1) * u * std::fabs(static_cast<double>(z[i])) * (1.0 + r * u);
        ez[i] = lip * ein + rnd;
      } else {
        const auto& c = custom_activation(a.param);
        Float v = c.eval(z[i]);
        ez[i] = c.lipschitz ? *c.lipschitz * ez[i] + u * std::fabs(static_cast<double>(v)) : inf;
        z[i] = std::move(v);
      }
    }
    y = std::move(z);
    e = std::move(ez);
  }
  out.value = std::move(y);
  out.error_bound = std::move(e);
  return out;
}

FloatEvaluation evaluate_float(const Network& net, const std::vector<double>& x, unsigned precision_bits) {
  if (precision_bits == 0) precision_bits = default_precision_bits();
  PrecisionScope scope(precision_bits);
  std::vector<Float> xf(x.begin(), x.end());
  return evaluate_float(net, xf, precision_bits);
}

}  // namespace nncalc
