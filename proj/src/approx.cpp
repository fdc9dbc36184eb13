#include "nncalc/approx.hpp"

#include "nncalc/gadgets.hpp"
#include "nncalc/norms.hpp"
#include "nncalc/random_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nncalc {

namespace {

constexpr int kMaxDyadic = 20;

Rational dyadic(int m) { return Rational(1, Integer(1) << m); }

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PiecewisePoly finite_difference(const PiecewisePoly& f, unsigned k, const Rational& h) {
  std::vector<PiecewisePoly> shifted;
  shifted.reserve(k + 1);
  for (unsigned i = 0; i <= k; ++i) shifted.push_back(f.compose_affine(1, h * i));
  std::vector<PwTerm> terms;
  for (unsigned i = 0; i <= k; ++i)
    terms.push_back({Rational(binomial(k, i)) * ((k - i) % 2 == 0 ? 1 : -1), &shifted[i]});
  return affine_combination(terms);
}

double difference_norm(const PiecewisePoly& f, unsigned k, const Rational& h, double p) {
  if (!(h > 0)) return 0;
  Rational hi = 1 - h * k;
  if (hi < 0) return 0;
  PiecewisePoly D = finite_difference(f, k, h);
  if (hi == 0) return std::isinf(p) ? std::fabs(D(0).get_d()) : 0.0;
  NormValue n = lp_norm(D, p, 0, hi);
  // Lower end of the enclosure: the estimate stays a lower bound.
  if (std::isinf(p)) return n.lo.get_d();
  if (n.quadrature) return n.value;
  return std::pow(n.lo.get_d(), 1.0 / p);
}

ModulusValue modulus(const PiecewisePoly& f, unsigned k, double p, const Rational& t, const std::vector<Rational>& extra) {
  if (k < 1) throw std::invalid_argument("modulus order must be at least 1");
  std::vector<Rational> probes;
  for (int m = 0; m <= kMaxDyadic; ++m)
    if (dyadic(m) <= t) probes.push_back(dyadic(m));
  probes.push_back(t);
  for (const auto& h : extra)
    if (h > 0 && h <= t) probes.push_back(h);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  ModulusValue best;
  for (const auto& h : probes) {
    double v = difference_norm(f, k, h, p);
    if (v > best.value) best = {v, h};
  }
  return best;
}

ModulusTable modulus_table(const PiecewisePoly& f, unsigned k, double p, std::vector<Rational> ts) {
  std::sort(ts.begin(), ts.end());
  ModulusTable out{k, p, {}};
  double running = 0;
  for (const auto& t : ts) {
    running = std::max(running, modulus(f, k, p, t).value);
    out.samples.push_back({t, running});
  }
  return out;
}

double besov_lower(const PiecewisePoly& f, double s, double p, double q, unsigned k) {
  std::vector<double> norms(kMaxDyadic + 1);
  for (int m = 0; m <= kMaxDyadic; ++m) norms[m] = difference_norm(f, k, dyadic(m), p);
  // omega[m] ≤ ω_k(f)_p(2^{−m}).
  std::vector<double> omega(kMaxDyadic + 1);
  double run = 0;
  for (int m = kMaxDyadic; m >= 0; --m) omega[m] = run = std::max(run, norms[m]);
  if (std::isinf(q)) {
    double best = 0;
    for (int m = 0; m <= kMaxDyadic; ++m) best = std::max(best, std::pow(2.0, m * s) * omega[m]);
    return best;
  }
  double total = 0;
  for (int m = 0; m < kMaxDyadic; ++m) total += std::pow(std::pow(2.0, m * s) * omega[m + 1], q);
  return std::pow(std::log(2.0) * total, 1.0 / q);
}

ApproxErrorCurve free_knot_curve(const PiecewisePoly& f, const std::vector<std::size_t>& budgets, unsigned degree,
                                 double p, unsigned resolution) {
  ApproxErrorCurve c;
  c.family = "free-knot-ppoly";
  c.degree = degree;
  c.p = p;
  c.budgets = budgets;
  std::sort(c.budgets.begin(), c.budgets.end());
  c.budgets.erase(std::unique(c.budgets.begin(), c.budgets.end()), c.budgets.end());
  std::vector<std::size_t> positive;
  for (auto n : c.budgets)
    if (n > 0) positive.push_back(n);
  auto fits = best_free_knot(f, positive, degree, p, resolution);
  double running = lp_norm(f, p, 0, 1).value;
  std::size_t next = 0;
  for (auto n : c.budgets) {
    if (n > 0) running = std::min(running, fits[next++].error);
    c.errors.push_back(running);
  }
  return c;
}

TruncatedNorm truncated_approx_norm(const ApproxErrorCurve& curve, double alpha, double q) {
  if (curve.budgets.size() != curve.errors.size()) throw std::invalid_argument("curve budgets and errors differ in length");
  for (std::size_t i = 1; i < curve.errors.size(); ++i)
    if (curve.errors[i] > curve.errors[i - 1]) throw std::invalid_argument("curve errors must be nonincreasing");
  TruncatedNorm out;
  double acc = 0;
  for (std::size_t i = 0; i < curve.budgets.size(); ++i) {
    double n = static_cast<double>(curve.budgets[i] + 1);
    double term = std::pow(n, alpha) * curve.errors[i];
    if (std::isinf(q)) acc = std::max(acc, term);
    else acc += std::pow(term, q) / n;
    out.truncation = curve.budgets[i] + 1;
    ++out.terms;
  }
  out.value = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
  return out;
}

bool inapprox_applicable(unsigned j, std::size_t N, unsigned alpha) {
  return Integer(N) * 4 * (1 + alpha) <= (Integer(1) << j) + 1;
}

InapproxReport sawtooth_inapprox_check(unsigned j, std::size_t N, unsigned alpha, double p, unsigned resolution) {
  if (N < 1 || !inapprox_applicable(j, N, alpha))
    throw std::invalid_argument("precondition N <= (2^j + 1)/(4(1 + alpha)) violated");
  FreeKnotResult fit = best_free_knot(sawtooth_pw(j), N, alpha, p, resolution);
  InapproxReport r;
  r.j = j;
  r.N = N;
  r.alpha = alpha;
  r.p = p;
  r.resolution = resolution;
  r.dp_error = std::isinf(p) ? fit.error_pow_lo.get_d() : std::pow(fit.error_pow_lo.get_d(), 1.0 / p);
  r.bound = std::isinf(p) ? 1.0 : std::pow(2.0, -5.0 / p);
  r.margin = r.dp_error - r.bound;
  r.pass = p == 1 ? fit.error_pow_lo >= Rational(1, 32) : r.dp_error >= r.bound;
  return r;
}

std::string inapprox_csv_header() { return "j,N,alpha,p,resolution,dp_error,lower_bound,pass"; }

std::string inapprox_csv_row(const InapproxReport& r) {
  return std::to_string(r.j) + "," + std::to_string(r.N) + "," + std::to_string(r.alpha) + "," + fmt(r.p) + "," +
         std::to_string(r.resolution) + "," + fmt(r.dp_error) + "," + fmt(r.bound) + "," + (r.pass ? "true" : "false");
}

BernsteinReport bernstein_probe(const std::vector<std::size_t>& n_list, double s, double p, unsigned degree,
                                std::uint64_t seed) {
  if (!(s > 0 && s < degree + 1)) throw std::invalid_argument("bernstein_probe needs 0 < s < degree + 1");
  BernsteinReport rep;
  rep.s = s;
  rep.p = p;
  rep.sigma = 1 / (s + 1 / p);
  unsigned k = std::max(2u, static_cast<unsigned>(std::floor(s)) + 1);
  SplitMix64 root(seed);
  auto add = [&](std::string label, std::size_t n, const PiecewisePoly& f) {
    BernsteinEntry e{std::move(label), n, 0, 0, 0};
    e.lp = lp_norm(f, p, 0, 1).value;
    e.besov = besov_lower(f, s, rep.sigma, rep.sigma, k);
    e.ratio = e.lp > 0 ? e.besov / e.lp : 0;
    rep.entries.push_back(std::move(e));
  };
  for (std::size_t n : n_list) {
    if (n >= 2 && (n & (n - 1)) == 0) {
      unsigned j = 0;
      while ((std::size_t(1) << j) < n) ++j;
      add("sawtooth:" + std::to_string(j), n, sawtooth_pw(j));
    }
    SplitMix64 rng = root.split(n);
    add("spline:" + std::to_string(n), n, random_spline(rng, n, degree));
  }
  std::vector<double> lx, ly;
  for (const auto& e : rep.entries) {
    if (e.ratio > 0) rep.constant = std::max(rep.constant, e.ratio / std::pow(static_cast<double>(e.pieces), s));
    if (e.label.rfind("sawtooth:", 0) == 0 && e.ratio > 0 && e.pieces >= rep.fit_from) {
      lx.push_back(std::log(static_cast<double>(e.pieces)));
      ly.push_back(std::log(e.ratio));
    }
  }
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= lx.size();
    my /= lx.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    rep.slope = sxy / sxx;
  }
  rep.pass = lx.size() < 2 || rep.slope <= s + 0.1;
  return rep;
}

}  // namespace nncalc
