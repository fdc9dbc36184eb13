#include "nncalc/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace nncalc {

namespace {

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  std::string n(num[0] == '+' ? num.substr(1) : num);
  Integer d{std::string(den)};
  if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational q(Integer(n), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  return out;  // already canonical: gcd(num^e, den^e) = 1
}

Rational rho(const Rational& x, unsigned r) {
  if (sgn(x) <= 0) return Rational(0);
  return r == 1 ? x : pow(x, r);
}

Integer floor(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Integer ceil(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Integer binomial(unsigned n, unsigned k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Integer factorial(unsigned n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double cannot become a rational");
  return Rational(x);
}

double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

Rational between(const Rational& a, const Rational& b) {
  if (!(a < b)) throw std::invalid_argument("between: need a < b");
  // Try integers and dyadic refinements first so sample points stay small.
  Integer fa = floor(a) + 1;
  if (Rational(fa) < b) {
    Integer fb = ceil(b) - 1;
    Integer mid = (fa + fb) / 2;
    if (Rational(mid) > a && Rational(mid) < b) return Rational(mid);
    return Rational(fa);
  }
  Rational width = b - a;
  Integer scale = 1;
  while (Rational(1, 1) / Rational(scale) >= width / 2) scale *= 2;
  Rational s(scale);
  Integer k = floor(a * s) + 1;
  Rational cand(k, scale);
  cand.canonicalize();
  if (cand > a && cand < b) return cand;
  Rational m = (a + b) / 2;
  return m;
}

}  // namespace nncalc
